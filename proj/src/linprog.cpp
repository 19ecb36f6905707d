#include "propcrit/errors.hpp"
#include "propcrit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace propcrit {

LpResult lp_maximize(const Vector& c, const Matrix& A, const Vector& b) {
    const Eigen::Index m = A.rows();
    const Eigen::Index n = A.cols();
    if (c.size() != n || b.size() != m) throw ContractViolation("lp_maximize: dimension mismatch");
    if (m > 0 && b.minCoeff() < 0) throw ContractViolation("lp_maximize: b must be nonnegative");

    constexpr double kPivotEps = 1e-12;
    const Eigen::Index width = n + m + 1;
    Matrix T = Matrix::Zero(m + 1, width);
    T.topLeftCorner(m, n) = A;
    T.block(0, n, m, m).setIdentity();
    T.topRightCorner(m, 1) = b;
    T.bottomLeftCorner(1, n) = -c.transpose();

    std::vector<Eigen::Index> basis(m);
    for (Eigen::Index i = 0; i < m; ++i) basis[i] = n + i;

    const long max_iter = 50000;
    for (long iter = 0; iter < max_iter; ++iter) {
        // Bland: smallest index with negative reduced cost
        Eigen::Index enter = -1;
        for (Eigen::Index j = 0; j < n + m; ++j) {
            if (T(m, j) < -kPivotEps) {
                enter = j;
                break;
            }
        }
        if (enter < 0) break;

        Eigen::Index leave = -1;
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < m; ++i) {
            const double a = T(i, enter);
            if (a > kPivotEps) {
                const double ratio = T(i, width - 1) / a;
                if (ratio < best - 1e-15 ||
                    (ratio <= best + 1e-15 && leave >= 0 && basis[i] < basis[leave])) {
                    best = std::min(best, ratio);
                    leave = i;
                }
            }
        }
        if (leave < 0) {
            LpResult r;
            r.status = LpStatus::unbounded;
            r.x = Vector::Zero(n);
            r.value = std::numeric_limits<double>::infinity();
            return r;
        }

        T.row(leave) /= T(leave, enter);
        for (Eigen::Index i = 0; i <= m; ++i) {
            if (i != leave && T(i, enter) != 0.0) {
                T.row(i) -= T(i, enter) * T.row(leave);
            }
        }
        basis[leave] = enter;
        if (iter + 1 == max_iter) throw NumericalFailure("lp_maximize: iteration budget exhausted");
    }

    LpResult r;
    r.x = Vector::Zero(n);
    for (Eigen::Index i = 0; i < m; ++i) {
        if (basis[i] < n) r.x[basis[i]] = std::max(0.0, T(i, width - 1));
    }
    r.value = c.dot(r.x);
    return r;
}

std::optional<Vector> lp_nonzero_feasible(const Matrix& A, const Tolerance& tol) {
    const Eigen::Index d = A.cols();
    if (d < 1) throw ContractViolation("lp_nonzero_feasible: need at least one column");
    if (!A.allFinite()) throw ContractViolation("lp_nonzero_feasible: non-finite entry");
    if (A.rows() == 0) {
        Vector x = Vector::Zero(d);
        x[0] = 1.0;
        return x;
    }

    // Normalize rows so that the feasibility slack is scale free.
    Matrix An = A;
    for (Eigen::Index i = 0; i < An.rows(); ++i) {
        const double nrm = An.row(i).norm();
        if (nrm > 0) An.row(i) /= nrm;
    }

    // Split x = xp - xm with 0 <= xp, xm <= 1. Every right-hand side is >= 0.
    const Eigen::Index m = An.rows();
    Matrix M = Matrix::Zero(m + 2 * d, 2 * d);
    M.topLeftCorner(m, d) = -An;
    M.topRightCorner(m, d) = An;
    M.bottomRows(2 * d).setIdentity();
    Vector rhs = Vector::Zero(m + 2 * d);
    rhs.tail(2 * d).setOnes();

    // The optimum over the box is either 0 (trivial cone) or reaches 1 on the
    // coordinate where a normalized cone element attains its max-norm.
    double best_value = 0.0;
    Vector best_x;
    for (Eigen::Index i = 0; i < d; ++i) {
        for (double sign : {1.0, -1.0}) {
            Vector c = Vector::Zero(2 * d);
            c[i] = sign;
            c[d + i] = -sign;
            const LpResult res = lp_maximize(c, M, rhs);
            if (res.status == LpStatus::optimal && res.value > best_value) {
                best_value = res.value;
                best_x = res.x.head(d) - res.x.tail(d);
            }
        }
    }
    if (best_value <= 0.5) return std::nullopt;

    best_x /= best_x.cwiseAbs().maxCoeff();
    if ((An * best_x).minCoeff() < -tol.eps_geom * 10) {
        throw NumericalFailure("lp_nonzero_feasible: solution violates its own inequalities");
    }
    return best_x;
}

Vector nnls(const Matrix& A, const Vector& b, int max_iter) {
    const Eigen::Index m = A.rows();
    const Eigen::Index n = A.cols();
    if (b.size() != m) throw ContractViolation("nnls: dimension mismatch");
    Vector x = Vector::Zero(n);
    if (n == 0) return x;
    if (max_iter <= 0) max_iter = static_cast<int>(3 * n + 30);

    const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                       std::max<double>(1.0, A.cwiseAbs().colwise().sum().maxCoeff()) *
                       static_cast<double>(std::max(m, n));

    std::vector<bool> passive(n, false);
    auto solve_passive = [&](Vector& z) {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (passive[j]) idx.push_back(j);
        }
        z = Vector::Zero(n);
        if (idx.empty()) return;
        Matrix Ap(m, static_cast<Eigen::Index>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k) Ap.col(k) = A.col(idx[k]);
        const Vector zp = Ap.completeOrthogonalDecomposition().solve(b);
        for (std::size_t k = 0; k < idx.size(); ++k) z[idx[k]] = zp[k];
    };

    Vector w = A.transpose() * (b - A * x);
    for (int outer = 0; outer < max_iter; ++outer) {
        Eigen::Index t = -1;
        double wmax = tol;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!passive[j] && w[j] > wmax) {
                wmax = w[j];
                t = j;
            }
        }
        if (t < 0) break;
        passive[t] = true;

        Vector z;
        solve_passive(z);
        for (int inner = 0; inner < max_iter; ++inner) {
            bool all_positive = true;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[j] && z[j] <= tol) all_positive = false;
            }
            if (all_positive) break;
            double alpha = 1.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[j] && z[j] <= tol) {
                    const double denom = x[j] - z[j];
                    if (denom > 0) alpha = std::min(alpha, x[j] / denom);
                }
            }
            x += alpha * (z - x);
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[j] && x[j] <= tol) {
                    passive[j] = false;
                    x[j] = 0.0;
                }
            }
            solve_passive(z);
        }
        x = z;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!passive[j]) x[j] = 0.0;
        }
        w = A.transpose() * (b - A * x);
    }
    return x.cwiseMax(0.0);
}

}  // namespace propcrit
