#include "propcrit/errors.hpp"
#include "propcrit/flats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace propcrit {
namespace {

constexpr double kRayEps = 1e-10;

Matrix stack_columns(const std::vector<Vector>& cols, Eigen::Index d) {
    Matrix M(d, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) M.col(static_cast<Eigen::Index>(j)) = cols[j];
    return M;
}

Vector project_out(const Vector& v, const Matrix& L) {
    if (L.cols() == 0) return v;
    return v - L * (L.transpose() * v);
}

// Drops zero, duplicate and conically redundant rays.
std::vector<Vector> prune_rays(std::vector<Vector> rays, const Matrix& L) {
    std::vector<Vector> unit;
    for (auto& r : rays) {
        Vector p = project_out(r, L);
        const double n = p.norm();
        if (n <= kRayEps) continue;
        p /= n;
        bool dup = false;
        for (const auto& u : unit) {
            if ((u - p).norm() <= 1e-9) {
                dup = true;
                break;
            }
        }
        if (!dup) unit.push_back(std::move(p));
    }
    const Eigen::Index d = L.rows();
    for (std::size_t i = unit.size(); i-- > 0;) {
        if (unit.size() <= 1) break;
        std::vector<Vector> others;
        for (std::size_t j = 0; j < unit.size(); ++j) {
            if (j != i) others.push_back(unit[j]);
        }
        for (Eigen::Index k = 0; k < L.cols(); ++k) {
            others.push_back(L.col(k));
            others.push_back(-L.col(k));
        }
        const Matrix G = stack_columns(others, d);
        const Vector lam = nnls(G, unit[i]);
        if ((G * lam - unit[i]).norm() <= 1e-9) unit.erase(unit.begin() + static_cast<long>(i));
    }
    return unit;
}

}  // namespace

Cone Cone::from_inequalities(const Matrix& A, const Tolerance& tol) {
    const Eigen::Index d = A.cols();
    if (d < 1) throw ContractViolation("cone: ambient dimension must be positive");
    if (d > 6) throw Unsupported("cone: generator conversion limited to dimension <= 6");
    if (!A.allFinite()) throw ContractViolation("cone: non-finite inequality");

    Matrix L = Matrix::Identity(d, d);
    std::vector<Vector> R;
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        const double an = A.row(i).norm();
        if (an <= tol.eps_rank) continue;
        const Vector a = A.row(i).transpose() / an;

        const Vector aL = L.transpose() * a;
        Eigen::Index j = -1;
        if (L.cols() > 0) aL.cwiseAbs().maxCoeff(&j);
        if (j >= 0 && std::abs(aL[j]) > kRayEps) {
            // a cuts the lineality space: trade one lineality direction for a ray
            const Vector l0 = L.col(j) * (aL[j] > 0 ? 1.0 : -1.0);
            const double al0 = a.dot(l0);
            Matrix rest(d, L.cols() - 1);
            for (Eigen::Index k = 0, c = 0; k < L.cols(); ++k) {
                if (k == j) continue;
                rest.col(c++) = L.col(k) - (a.dot(L.col(k)) / al0) * l0;
            }
            for (auto& r : R) r -= (a.dot(r) / al0) * l0;
            R.push_back(l0);
            L = rest.cols() > 0 ? orthonormal_basis(rest, tol) : Matrix(d, 0);
            R = prune_rays(std::move(R), L);
            continue;
        }

        std::vector<Vector> P, Z, N;
        for (const auto& r : R) {
            const double s = a.dot(r);
            if (s > kRayEps) P.push_back(r);
            else if (s < -kRayEps) N.push_back(r);
            else Z.push_back(r);
        }
        std::vector<Vector> next = P;
        next.insert(next.end(), Z.begin(), Z.end());
        for (const auto& p : P) {
            for (const auto& n : N) next.push_back(a.dot(p) * n - a.dot(n) * p);
        }
        R = prune_rays(std::move(next), L);
    }

    Cone K;
    K.ineqs = A;
    K.lineality = L;
    K.rays = stack_columns(prune_rays(std::move(R), L), d);
    return K;
}

Cone Cone::from_subspace(const Matrix& basis, const Tolerance& tol) {
    const Eigen::Index d = basis.rows();
    if (d < 1) throw ContractViolation("cone: ambient dimension must be positive");
    Cone K;
    K.lineality = basis.cols() > 0 ? orthonormal_basis(basis, tol) : Matrix(d, 0);
    const Matrix N = orthogonal_complement(K.lineality, tol);
    K.ineqs.resize(2 * N.cols(), d);
    K.ineqs << N.transpose(), -N.transpose();
    K.rays = Matrix(d, 0);
    return K;
}

bool Cone::contains(const Vector& x, double eps) const {
    if (ineqs.rows() == 0) return true;
    for (Eigen::Index i = 0; i < ineqs.rows(); ++i) {
        const double an = ineqs.row(i).norm();
        if (an == 0.0) continue;
        if (ineqs.row(i).dot(x) / an < -eps) return false;
    }
    return true;
}

bool Cone::subset_of(const Cone& other, double eps) const {
    for (Eigen::Index k = 0; k < rays.cols(); ++k) {
        if (!other.contains(rays.col(k), eps)) return false;
    }
    for (Eigen::Index k = 0; k < lineality.cols(); ++k) {
        if (!other.contains(lineality.col(k), eps)) return false;
        if (!other.contains(-lineality.col(k), eps)) return false;
    }
    return true;
}

Matrix Cone::generator_matrix() const {
    Matrix G(dim(), rays.cols() + 2 * lineality.cols());
    G << rays, lineality, -lineality;
    return G;
}

Cone Cone::transformed(const Matrix& w) const {
    Cone K;
    K.ineqs = ineqs * w.transpose();
    K.rays = w * rays;
    K.lineality = w * lineality;
    return K;
}

double cone_distance(const Cone& K, const Vector& x) {
    if (x.size() != K.dim()) throw ContractViolation("cone_distance: dimension mismatch");
    const Vector p = project_out(x, K.lineality);
    if (K.rays.cols() == 0) return p.norm();
    const Vector lam = nnls(K.rays, p);
    return (K.rays * lam - p).norm();
}

}  // namespace propcrit
