#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace propcrit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thresholds shared by every geometric decision in the library.
///
/// Rank and triviality tests in different modules must agree, so a single
/// policy object is threaded through all of them instead of local constants.
struct Tolerance {
    double eps_orth = 1e-12;   ///< orthogonality / symmetry defect
    double eps_rank = 1e-8;    ///< rank and nullspace threshold
    double eps_geom = 1e-9;    ///< distance comparisons
    double eps_recon = 1e-9;   ///< factorization residual (relative)

    /// Throws ContractViolation unless all thresholds are positive and eps_rank >= eps_orth.
    void validate() const;
};

struct Svd {
    Matrix U;
    Vector s;   // descending, nonnegative
    Matrix V;
};

/// Full SVD, A = U diag(s) V^T. Each left singular vector has its first
/// nonzero entry made nonnegative (the paired right vector flips with it).
Svd svd(const Matrix& A, const Tolerance& tol = {});

struct SymEig {
    Matrix Q;
    Vector lam;  // descending
};

/// Eigen-decomposition of a symmetric matrix. Throws ContractViolation if
/// the input is not symmetric within eps_orth (relative to its norm).
SymEig sym_eig(const Matrix& S, const Tolerance& tol = {});

/// Matrix logarithm of an SPD matrix; DomainError if some eigenvalue <= eps_rank.
Matrix spd_log(const Matrix& P, const Tolerance& tol = {});
/// Matrix exponential of a symmetric matrix.
Matrix sym_exp(const Matrix& X, const Tolerance& tol = {});
Matrix spd_sqrt(const Matrix& P, const Tolerance& tol = {});
Matrix spd_inv_sqrt(const Matrix& P, const Tolerance& tol = {});

struct SimultaneousDiag {
    Matrix Q;                   // orthogonal
    std::vector<Vector> diags;  // diag(Q^T X_i Q)
};

/// Joint diagonalization of a commuting family of symmetric matrices.
///
/// Works block by block: each matrix refines the eigenspaces left degenerate
/// by the previous ones. Columns of Q carry the sign convention of svd().
/// Throws DomainError naming the first non-commuting pair.
SimultaneousDiag simultaneous_diag(std::span<const Matrix> Xs, const Tolerance& tol = {});

/// Returns x with A x >= 0 and max|x_i| = 1 if the cone {x : A x >= 0}
/// contains a nonzero point, otherwise nullopt. Decided by 2d bounded LPs
/// maximizing +-x_i over the cone intersected with the unit box.
std::optional<Vector> lp_nonzero_feasible(const Matrix& A, const Tolerance& tol = {});

// ---------------------------------------------------------------------------
// Lower-level solvers used by the geometric modules.

enum class LpStatus { optimal, unbounded };

struct LpResult {
    LpStatus status = LpStatus::optimal;
    Vector x;
    double value = 0.0;
};

/// max c^T x  s.t.  A x <= b, x >= 0, with b >= 0 (the slack basis is feasible).
/// Dense tableau simplex with Bland's rule.
LpResult lp_maximize(const Vector& c, const Matrix& A, const Vector& b);

/// Lawson-Hanson non-negative least squares: argmin_{x >= 0} ||A x - b||.
Vector nnls(const Matrix& A, const Vector& b, int max_iter = 0);

/// Orthonormal basis (columns) of the column space of M, rank cut at eps_rank.
Matrix orthonormal_basis(const Matrix& M, const Tolerance& tol = {});
/// Orthonormal basis of the orthogonal complement of the column space of M in R^rows.
Matrix orthogonal_complement(const Matrix& M, const Tolerance& tol = {});

/// Max-abs entry of Q^T Q - I.
double orthogonality_defect(const Matrix& Q);

/// Flip the sign of x so that its first entry with |x_i| > eps is positive.
void fix_sign(Eigen::Ref<Vector> x, double eps = 1e-12);

}  // namespace propcrit
