#include "doctest.h"
#include "oracles.hpp"

#include "propcrit/errors.hpp"
#include "propcrit/numerics.hpp"

#include <random>

using namespace propcrit;

namespace {

Matrix random_matrix(int r, int c, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = nd(rng);
    return m;
}

Matrix random_spd(int n, std::mt19937_64& rng) {
    const Matrix a = random_matrix(n, n, rng);
    return a * a.transpose() + Matrix::Identity(n, n);
}

}  // namespace

TEST_CASE("tolerance policy validation") {
    Tolerance t;
    CHECK_NOTHROW(t.validate());
    t.eps_rank = 1e-14;
    CHECK_THROWS_AS(t.validate(), ContractViolation);
    t = Tolerance{};
    t.eps_geom = 0.0;
    CHECK_THROWS_AS(t.validate(), ContractViolation);
}

TEST_CASE("svd reconstructs and orders singular values") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix A = random_matrix(4, 4, rng);
        const Svd f = svd(A);
        CHECK((f.U * f.s.asDiagonal() * f.V.transpose() - A).norm() < 1e-12 * A.norm());
        for (Eigen::Index i = 1; i < f.s.size(); ++i) CHECK(f.s[i - 1] >= f.s[i]);
        CHECK(orthogonality_defect(f.U) < 1e-13);
        CHECK(orthogonality_defect(f.V) < 1e-13);
        const Vector ref = oracle::mu_eig(A);
        CHECK((f.s.array().log().matrix() - ref).norm() < 1e-10);
    }
}

TEST_CASE("sym_eig rejects asymmetric input and returns descending eigenvalues") {
    Matrix S(2, 2);
    S << 2.0, 1.0, 1.0, 3.0;
    const SymEig e = sym_eig(S);
    CHECK(e.lam[0] == doctest::Approx((5.0 + std::sqrt(5.0)) / 2.0));
    CHECK(e.lam[1] == doctest::Approx((5.0 - std::sqrt(5.0)) / 2.0));
    S(0, 1) = 1.5;
    CHECK_THROWS_AS(sym_eig(S), ContractViolation);
}

TEST_CASE("spd_log and sym_exp are inverse; square roots multiply back") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix P = random_spd(3, rng);
        CHECK((sym_exp(spd_log(P)) - P).norm() < 1e-10 * P.norm());
        const Matrix r = spd_sqrt(P);
        CHECK((r * r - P).norm() < 1e-10 * P.norm());
        CHECK((spd_inv_sqrt(P) * r - Matrix::Identity(3, 3)).norm() < 1e-10);
    }
    Matrix bad = Matrix::Identity(2, 2);
    bad(1, 1) = -1.0;
    CHECK_THROWS_AS(spd_log(bad), DomainError);
}

TEST_CASE("simultaneous diagonalization of a commuting family") {
    std::mt19937_64 rng(3);
    const Matrix Q = svd(random_matrix(3, 3, rng)).U;
    Vector a(3), b(3);
    a << 1.0, 1.0, -2.0;  // degenerate: needs the second matrix to split
    b << 1.0, -1.0, 0.0;
    const std::vector<Matrix> Xs{Q * a.asDiagonal() * Q.transpose(), Q * b.asDiagonal() * Q.transpose()};
    const SimultaneousDiag sd = simultaneous_diag(Xs);
    CHECK(orthogonality_defect(sd.Q) < 1e-12);
    for (std::size_t i = 0; i < Xs.size(); ++i) {
        const Matrix D = sd.Q.transpose() * Xs[i] * sd.Q;
        CHECK((D - Matrix(D.diagonal().asDiagonal())).norm() < 1e-10);
        CHECK((D.diagonal() - sd.diags[i]).norm() < 1e-12);
    }
    Matrix N(2, 2), M(2, 2);
    N << 1.0, 0.0, 0.0, -1.0;
    M << 0.0, 1.0, 1.0, 0.0;
    CHECK_THROWS_AS(simultaneous_diag(std::vector<Matrix>{N, M}), DomainError);
}

TEST_CASE("lp_nonzero_feasible on cones") {
    // the positive quadrant contains nonzero points
    Matrix A = Matrix::Identity(2, 2);
    auto x = lp_nonzero_feasible(A);
    REQUIRE(x.has_value());
    CHECK((A * *x).minCoeff() >= -1e-12);
    CHECK(x->cwiseAbs().maxCoeff() == doctest::Approx(1.0));
    // x >= 0 and -x >= 0 forces x = 0
    Matrix B(4, 2);
    B << 1, 0, 0, 1, -1, 0, 0, -1;
    CHECK_FALSE(lp_nonzero_feasible(B).has_value());
    // a half-line: x1 >= 0, x2 = 0
    Matrix C(3, 2);
    C << 1, 0, 0, 1, 0, -1;
    auto y = lp_nonzero_feasible(C);
    REQUIRE(y.has_value());
    CHECK(std::abs((*y)[1]) < 1e-12);
    CHECK((*y)[0] > 0.0);
}

TEST_CASE("lp_maximize small problem") {
    // max x + y s.t. x + 2y <= 4, 3x + y <= 6
    Vector c(2);
    c << 1, 1;
    Matrix A(2, 2);
    A << 1, 2, 3, 1;
    Vector b(2);
    b << 4, 6;
    const LpResult r = lp_maximize(c, A, b);
    CHECK(r.status == LpStatus::optimal);
    CHECK(r.value == doctest::Approx(2.8));
    CHECK(r.x[0] == doctest::Approx(1.6));
    CHECK(r.x[1] == doctest::Approx(1.2));
}

TEST_CASE("nnls matches unconstrained least squares when the solution is positive") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix A = random_matrix(6, 3, rng);
        Vector xt(3);
        xt << 1.0, 2.0, 0.5;
        const Vector x = nnls(A, A * xt);
        CHECK((x - xt).norm() < 1e-9);
    }
    Matrix A = Matrix::Identity(2, 2);
    Vector b(2);
    b << -1.0, 2.0;
    const Vector x = nnls(A, b);
    CHECK(x[0] == doctest::Approx(0.0));
    CHECK(x[1] == doctest::Approx(2.0));
}

TEST_CASE("orthonormal basis, complement and sign convention") {
    Matrix M(3, 2);
    M << 1, 2, 1, 2, 0, 0;  // rank one
    const Matrix B = orthonormal_basis(M);
    CHECK(B.cols() == 1);
    const Matrix N = orthogonal_complement(M);
    CHECK(N.cols() == 2);
    CHECK((B.transpose() * N).norm() < 1e-12);
    Vector v(3);
    v << 0.0, -2.0, 1.0;
    fix_sign(v);
    CHECK(v[1] == 2.0);
}
