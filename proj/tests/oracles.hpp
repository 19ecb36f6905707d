#pragma once

// Independent reference computations used by the tests. None of these call
// into the library's numerics; they are closed forms or brute force.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Log singular values of a 2x2 matrix from trace and determinant of g^T g.
inline Vector mu2(const Matrix& g) {
    const double a = g(0, 0), b = g(0, 1), c = g(1, 0), d = g(1, 1);
    const double t = a * a + b * b + c * c + d * d;
    const double det = std::abs(a * d - b * c);
    const double s1 = std::sqrt(0.5 * (t + std::sqrt(t * t - 4.0 * det * det)));
    const double s2 = det / s1;
    Vector out(2);
    out << std::log(s1), std::log(s2);
    return out;
}

/// Log singular values via the eigenvalues of g^T g (Eigen's self-adjoint solver).
inline Vector mu_eig(const Matrix& g) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(g.transpose() * g);
    Vector ev = es.eigenvalues();
    std::sort(ev.data(), ev.data() + ev.size(), std::greater<>());
    return 0.5 * ev.array().log().matrix();
}

/// Upper half-plane distance by the arcosh formula.
inline double hyp_dist(double x1, double y1, double x2, double y2) {
    const double num = (x1 - x2) * (x1 - x2) + (y1 - y2) * (y1 - y2);
    return std::acosh(1.0 + num / (2.0 * y1 * y2));
}

/// min over permutations w of ||a - w b||.
inline double perm_dist(const Vector& a, const Vector& b) {
    std::vector<int> idx(static_cast<std::size_t>(b.size()));
    std::iota(idx.begin(), idx.end(), 0);
    double best = INFINITY;
    do {
        double s = 0.0;
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[idx[static_cast<std::size_t>(i)]];
            s += d * d;
        }
        best = std::min(best, std::sqrt(s));
    } while (std::next_permutation(idx.begin(), idx.end()));
    return best;
}

/// All distinct permutations of v.
inline std::vector<Vector> permutations(Vector v) {
    std::sort(v.data(), v.data() + v.size());
    std::vector<Vector> out;
    do out.push_back(v);
    while (std::next_permutation(v.data(), v.data() + v.size()));
    return out;
}

/// Angle between two lines through the origin.
inline double line_angle(const Vector& u, const Vector& v) {
    return std::acos(std::min(1.0, std::abs(u.dot(v)) / (u.norm() * v.norm())));
}

/// Distance from x to span(B) by normal equations.
inline double dist_to_span(const Vector& x, const Matrix& B) {
    const Vector c = (B.transpose() * B).ldlt().solve(B.transpose() * x);
    return (x - B * c).norm();
}

/// Brute-force scan: largest ||p|| over p in P1 with some q in P2, ||p - q|| <= r; -1 if none.
inline double matched_max(const std::vector<Vector>& P1, const std::vector<Vector>& P2, double r) {
    double best = -1.0;
    for (const auto& p : P1) {
        for (const auto& q : P2) {
            if ((p - q).norm() <= r) {
                best = std::max(best, p.norm());
                break;
            }
        }
    }
    return best;
}

/// PosDef distance via generalized eigenvalues of (q, p).
inline double spd_dist(const Matrix& p, const Matrix& q) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(q, p);
    return es.eigenvalues().array().log().matrix().norm();
}

inline Matrix rot2(double t) {
    Matrix R(2, 2);
    R << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    return R;
}

}  // namespace oracle
