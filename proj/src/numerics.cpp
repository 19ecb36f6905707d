#include "propcrit/numerics.hpp"

#include "propcrit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace propcrit {

void Tolerance::validate() const {
    if (!(eps_orth > 0 && eps_rank > 0 && eps_geom > 0 && eps_recon > 0)) {
        throw ContractViolation("tolerance: all thresholds must be strictly positive");
    }
    if (eps_rank < eps_orth) {
        throw ContractViolation("tolerance: eps_rank must be >= eps_orth");
    }
}

namespace {

void require_finite(const Matrix& A, const char* who) {
    if (!A.allFinite()) {
        throw ContractViolation(std::string(who) + ": non-finite entry");
    }
}

double scale_of(const Matrix& A) { return std::max(1.0, A.norm()); }

}  // namespace

void fix_sign(Eigen::Ref<Vector> x, double eps) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (std::abs(x[i]) > eps) {
            if (x[i] < 0) x = -x;
            return;
        }
    }
}

double orthogonality_defect(const Matrix& Q) {
    const Matrix I = Matrix::Identity(Q.cols(), Q.cols());
    return (Q.transpose() * Q - I).cwiseAbs().maxCoeff();
}

Svd svd(const Matrix& A, const Tolerance& tol) {
    require_finite(A, "svd");
    Eigen::JacobiSVD<Matrix> solver(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Svd out{solver.matrixU(), solver.singularValues(), solver.matrixV()};

    const Eigen::Index k = out.s.size();
    for (Eigen::Index j = 0; j < out.U.cols(); ++j) {
        for (Eigen::Index i = 0; i < out.U.rows(); ++i) {
            if (std::abs(out.U(i, j)) > tol.eps_orth) {
                if (out.U(i, j) < 0) {
                    out.U.col(j) *= -1.0;
                    if (j < k) out.V.col(j) *= -1.0;
                }
                break;
            }
        }
    }

    Matrix S = Matrix::Zero(A.rows(), A.cols());
    for (Eigen::Index i = 0; i < k; ++i) S(i, i) = out.s[i];
    const double residual = (out.U * S * out.V.transpose() - A).norm();
    if (residual > tol.eps_recon * scale_of(A)) {
        std::ostringstream msg;
        msg << "svd: reconstruction residual " << residual << " exceeds tolerance";
        throw NumericalFailure(msg.str());
    }
    return out;
}

SymEig sym_eig(const Matrix& S, const Tolerance& tol) {
    require_finite(S, "sym_eig");
    if (S.rows() != S.cols()) throw ContractViolation("sym_eig: matrix is not square");
    const double asym = (S - S.transpose()).norm();
    if (asym > tol.eps_orth * scale_of(S) * std::max<Eigen::Index>(1, S.rows())) {
        std::ostringstream msg;
        msg << "sym_eig: matrix is not symmetric (defect " << asym << ")";
        throw ContractViolation(msg.str());
    }
    const Matrix Ssym = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(Ssym);
    if (solver.info() != Eigen::Success) throw NumericalFailure("sym_eig: solver did not converge");

    const Eigen::Index n = S.rows();
    SymEig out{Matrix(n, n), Vector(n)};
    for (Eigen::Index j = 0; j < n; ++j) {
        out.lam[j] = solver.eigenvalues()[n - 1 - j];
        out.Q.col(j) = solver.eigenvectors().col(n - 1 - j);
        fix_sign(out.Q.col(j), tol.eps_orth);
    }
    return out;
}

namespace {

template <class F>
Matrix spectral_apply(const SymEig& e, F&& f) {
    Vector mapped = e.lam.unaryExpr(f);
    return e.Q * mapped.asDiagonal() * e.Q.transpose();
}

SymEig spd_eig(const Matrix& P, const Tolerance& tol, const char* who) {
    SymEig e = sym_eig(P, tol);
    if (e.lam.size() > 0 && e.lam[e.lam.size() - 1] <= tol.eps_rank) {
        std::ostringstream msg;
        msg << who << ": matrix is not positive definite (eigenvalue " << e.lam[e.lam.size() - 1]
            << ")";
        throw DomainError(msg.str());
    }
    return e;
}

}  // namespace

Matrix spd_log(const Matrix& P, const Tolerance& tol) {
    return spectral_apply(spd_eig(P, tol, "spd_log"), [](double x) { return std::log(x); });
}

Matrix sym_exp(const Matrix& X, const Tolerance& tol) {
    return spectral_apply(sym_eig(X, tol), [](double x) { return std::exp(x); });
}

Matrix spd_sqrt(const Matrix& P, const Tolerance& tol) {
    return spectral_apply(spd_eig(P, tol, "spd_sqrt"), [](double x) { return std::sqrt(x); });
}

Matrix spd_inv_sqrt(const Matrix& P, const Tolerance& tol) {
    return spectral_apply(spd_eig(P, tol, "spd_inv_sqrt"),
                          [](double x) { return 1.0 / std::sqrt(x); });
}

SimultaneousDiag simultaneous_diag(std::span<const Matrix> Xs, const Tolerance& tol) {
    if (Xs.empty()) throw ContractViolation("simultaneous_diag: empty family");
    const Eigen::Index n = Xs.front().rows();
    for (std::size_t i = 0; i < Xs.size(); ++i) {
        if (Xs[i].rows() != n || Xs[i].cols() != n) {
            throw ContractViolation("simultaneous_diag: matrices differ in size");
        }
        require_finite(Xs[i], "simultaneous_diag");
        if ((Xs[i] - Xs[i].transpose()).norm() > tol.eps_orth * scale_of(Xs[i]) * n) {
            std::ostringstream msg;
            msg << "simultaneous_diag: matrix " << i << " is not symmetric";
            throw ContractViolation(msg.str());
        }
    }
    for (std::size_t i = 0; i < Xs.size(); ++i) {
        for (std::size_t j = i + 1; j < Xs.size(); ++j) {
            const double comm = (Xs[i] * Xs[j] - Xs[j] * Xs[i]).norm();
            if (comm > tol.eps_recon * std::max(1.0, Xs[i].norm() * Xs[j].norm())) {
                std::ostringstream msg;
                msg << "simultaneous_diag: matrices " << i << " and " << j
                    << " do not commute (commutator norm " << comm << ")";
                throw DomainError(msg.str());
            }
        }
    }

    Matrix Q = Matrix::Identity(n, n);
    std::vector<std::vector<Eigen::Index>> blocks(1);
    for (Eigen::Index i = 0; i < n; ++i) blocks[0].push_back(i);

    for (const Matrix& X : Xs) {
        const Matrix Xs_sym = 0.5 * (X + X.transpose());
        const double cut = tol.eps_rank * scale_of(X);
        std::vector<std::vector<Eigen::Index>> refined;
        for (const auto& block : blocks) {
            const auto k = static_cast<Eigen::Index>(block.size());
            if (k == 1) {
                refined.push_back(block);
                continue;
            }
            Matrix Qb(n, k);
            for (Eigen::Index c = 0; c < k; ++c) Qb.col(c) = Q.col(block[c]);
            Matrix sub = Qb.transpose() * Xs_sym * Qb;
            sub = 0.5 * (sub + sub.transpose());
            Eigen::SelfAdjointEigenSolver<Matrix> es(sub);
            // descending order inside the block
            Matrix V(k, k);
            Vector lam(k);
            for (Eigen::Index c = 0; c < k; ++c) {
                V.col(c) = es.eigenvectors().col(k - 1 - c);
                lam[c] = es.eigenvalues()[k - 1 - c];
            }
            const Matrix rotated = Qb * V;
            for (Eigen::Index c = 0; c < k; ++c) Q.col(block[c]) = rotated.col(c);

            std::vector<Eigen::Index> current{block[0]};
            for (Eigen::Index c = 1; c < k; ++c) {
                if (lam[c - 1] - lam[c] > cut) {
                    refined.push_back(current);
                    current.clear();
                }
                current.push_back(block[c]);
            }
            refined.push_back(current);
        }
        blocks = std::move(refined);
    }
    for (Eigen::Index j = 0; j < n; ++j) fix_sign(Q.col(j), tol.eps_orth);

    SimultaneousDiag out{Q, {}};
    for (std::size_t i = 0; i < Xs.size(); ++i) {
        const Matrix D = Q.transpose() * Xs[i] * Q;
        const double off = (D - Matrix(D.diagonal().asDiagonal())).norm();
        if (off > tol.eps_recon * scale_of(Xs[i]) * n) {
            std::ostringstream msg;
            msg << "simultaneous_diag: residual off-diagonal mass " << off << " for matrix " << i;
            throw NumericalFailure(msg.str());
        }
        out.diags.emplace_back(D.diagonal());
    }
    return out;
}

Matrix orthonormal_basis(const Matrix& M, const Tolerance& tol) {
    if (M.cols() == 0 || M.rows() == 0) return Matrix(M.rows(), 0);
    Eigen::JacobiSVD<Matrix> solver(M, Eigen::ComputeFullU);
    const Vector& s = solver.singularValues();
    const double cut = tol.eps_rank * std::max(1.0, s.size() > 0 ? s[0] : 0.0);
    Eigen::Index rank = 0;
    while (rank < s.size() && s[rank] > cut) ++rank;
    Matrix B = solver.matrixU().leftCols(rank);
    for (Eigen::Index j = 0; j < rank; ++j) fix_sign(B.col(j), tol.eps_orth);
    return B;
}

Matrix orthogonal_complement(const Matrix& M, const Tolerance& tol) {
    const Eigen::Index d = M.rows();
    if (M.cols() == 0) return Matrix::Identity(d, d);
    Eigen::JacobiSVD<Matrix> solver(M, Eigen::ComputeFullU);
    const Vector& s = solver.singularValues();
    const double cut = tol.eps_rank * std::max(1.0, s.size() > 0 ? s[0] : 0.0);
    Eigen::Index rank = 0;
    while (rank < s.size() && s[rank] > cut) ++rank;
    Matrix N = solver.matrixU().rightCols(d - rank);
    for (Eigen::Index j = 0; j < N.cols(); ++j) fix_sign(N.col(j), tol.eps_orth);
    return N;
}

}  // namespace propcrit
