#include "propcrit/flats.hpp"

#include "propcrit/errors.hpp"
#include "propcrit/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <unordered_set>

namespace propcrit {
namespace {

std::string matrix_key(const Matrix& M) {
    std::string key;
    key.reserve(static_cast<std::size_t>(M.size()) * 4);
    for (Eigen::Index i = 0; i < M.size(); ++i) {
        long long q = std::llround(M.data()[i] * 1e6);
        if (q == 0) q = 0;
        key += std::to_string(q);
        key += ',';
    }
    return key;
}

bool subspace_contained(const Matrix& B1, const Matrix& B2, double eps) {
    if (B1.cols() == 0) return true;
    if (B2.cols() == 0) return false;
    const Matrix R = B1 - B2 * (B2.transpose() * B1);
    return R.colwise().norm().maxCoeff() <= eps;
}

struct PairAngle {
    double sin_min = 1.0;
    double angle = std::numbers::pi / 2;
    Vector direction;  // unit vector of B1 realizing the smallest angle
};

PairAngle principal_angle(const Matrix& B1, const Matrix& B2) {
    PairAngle out;
    if (B1.cols() == 0 || B2.cols() == 0) return out;
    const Matrix M = B1 - B2 * (B2.transpose() * B1);
    Eigen::JacobiSVD<Matrix> js(M, Eigen::ComputeFullV);
    const Eigen::Index k = B1.cols() - 1;
    out.sin_min = js.singularValues()[k];
    out.direction = B1 * js.matrixV().col(k);
    out.direction.normalize();
    const double c = (B2.transpose() * out.direction).norm();
    out.angle = std::atan2(out.sin_min, c);
    return out;
}

// Certified lower bound on min{dist(x, K2) : x in K1, ||x|| = 1}. Uses the
// inf-norm slab normalization s*x_i >= 1 (2d convex subproblems solved by
// penalized NNLS, whose optimum never exceeds the constrained one), then the
// norm-equivalence factor sqrt(d).
double cone_separation_lower_bound(const Cone& K1, const Cone& K2) {
    if (K1.is_zero()) return 1.0;
    const Matrix G1 = K1.generator_matrix();
    const Matrix G2 = K2.generator_matrix();
    const Eigen::Index d = K1.dim();
    const Eigen::Index n1 = G1.cols();
    const Eigen::Index n2 = G2.cols();
    constexpr double w = 1e4;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < d; ++i) {
        for (const double s : {1.0, -1.0}) {
            const Vector row = s * G1.row(i).transpose();
            if (row.maxCoeff() <= 0.0) continue;  // slab unreachable from K1
            Matrix M = Matrix::Zero(d + 1, n1 + n2 + 1);
            M.topLeftCorner(d, n1) = G1;
            M.block(0, n1, d, n2) = -G2;
            M.block(d, 0, 1, n1) = w * row.transpose();
            M(d, n1 + n2) = -w;
            Vector b = Vector::Zero(d + 1);
            b[d] = w;
            const Vector z = nnls(M, b);
            best = std::min(best, (M * z - b).norm());
        }
    }
    if (!std::isfinite(best)) return 1.0;
    return std::min(1.0, best / std::sqrt(static_cast<double>(d)));
}

Cone as_cone(const StructuredSet& C, std::size_t i, const Tolerance& tol) {
    if (const auto* s = std::get_if<SubspaceUnion>(&C.data)) {
        if (s->bases[i].cols() == 0) {
            Cone K;
            const Eigen::Index d = C.dim;
            K.ineqs.resize(2 * d, d);
            K.ineqs << Matrix::Identity(d, d), -Matrix::Identity(d, d);
            K.rays = Matrix(d, 0);
            K.lineality = Matrix(d, 0);
            return K;
        }
        return Cone::from_subspace(s->bases[i], tol);
    }
    return std::get<ConeUnion>(C.data).cones[i];
}

void require_structured(const StructuredSet& C, const char* op) {
    if (C.is_cloud()) {
        throw DomainError(std::string(op) +
                          ": point-cloud input; use the sampled check instead");
    }
}

void require_same_dim(const StructuredSet& a, const StructuredSet& b, const char* op) {
    if (a.dim != b.dim) throw ContractViolation(std::string(op) + ": dimension mismatch");
}

// Unit directions of a component used when searching for far points.
std::vector<Vector> component_directions(const StructuredSet& C, std::size_t i, int count,
                                         std::mt19937_64& rng) {
    std::vector<Vector> dirs;
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Matrix G;
    bool signed_combos = false;
    if (const auto* s = std::get_if<SubspaceUnion>(&C.data)) {
        G = s->bases[i];
        signed_combos = true;
    } else if (const auto* c = std::get_if<ConeUnion>(&C.data)) {
        G = c->cones[i].generator_matrix();
    }
    if (G.cols() == 0) return dirs;
    for (Eigen::Index k = 0; k < G.cols(); ++k) {
        dirs.push_back(G.col(k).normalized());
        if (signed_combos) dirs.push_back(-G.col(k).normalized());
    }
    for (int t = 0; t < count; ++t) {
        Vector coef(G.cols());
        for (Eigen::Index k = 0; k < G.cols(); ++k) {
            coef[k] = signed_combos ? gauss(rng) : -std::log(std::max(unif(rng), 1e-300));
        }
        const Vector v = G * coef;
        const double n = v.norm();
        if (n > 1e-12) dirs.push_back(v / n);
    }
    return dirs;
}

double set_distance_from_cloud(const Vector& x, const PointCloud& P) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : P.points) best = std::min(best, (x - p).norm());
    return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// FlatSpace

FlatSpace::FlatSpace(int dim, std::optional<Vector> constraint, std::vector<Matrix> group,
                     const Tolerance& tol)
    : dim_(dim), constraint_(std::move(constraint)), group_(std::move(group)) {
    tol.validate();
    if (dim_ < 1) throw ContractViolation("flat space: dimension must be positive");
    if (group_.empty()) throw ContractViolation("flat space: group must be non-empty");
    if (constraint_) {
        if (constraint_->size() != dim_) throw ContractViolation("flat space: constraint size");
        const double n = constraint_->norm();
        if (n <= tol.eps_rank) throw ContractViolation("flat space: zero constraint functional");
        *constraint_ /= n;
    }
    std::unordered_set<std::string> keys;
    bool has_identity = false;
    for (const auto& w : group_) {
        if (w.rows() != dim_ || w.cols() != dim_) throw ContractViolation("flat space: group matrix size");
        if (orthogonality_defect(w) > std::max(tol.eps_orth, 1e-12) * dim_) {
            throw ContractViolation("flat space: group matrix not orthogonal");
        }
        if ((w - Matrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff() <= 1e-9) has_identity = true;
        if (constraint_) {
            const Vector wf = w * *constraint_;
            if ((wf - wf.dot(*constraint_) * *constraint_).norm() > tol.eps_rank) {
                throw ContractViolation("flat space: group does not preserve the constraint");
            }
        }
        keys.insert(matrix_key(w));
    }
    if (!has_identity) throw ContractViolation("flat space: group lacks the identity");
    for (const auto& a : group_) {
        if (!keys.count(matrix_key(Matrix(a.transpose())))) {
            throw ContractViolation("flat space: group not closed under inverses");
        }
        for (const auto& b : group_) {
            if (!keys.count(matrix_key(Matrix(a * b)))) {
                throw ContractViolation("flat space: group not closed under multiplication");
            }
        }
    }
}

FlatSpace FlatSpace::permutations(int n, bool sum_zero, const Tolerance& tol) {
    if (n < 1 || n > 7) throw ContractViolation("permutation flat: n must be in [1, 7]");
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::vector<Matrix> group;
    do {
        Matrix P = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i) P(perm[static_cast<std::size_t>(i)], i) = 1.0;
        group.push_back(std::move(P));
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::optional<Vector> c;
    if (sum_zero) c = Vector::Ones(n);
    return FlatSpace(n, std::move(c), std::move(group), tol);
}

FlatSpace FlatSpace::trivial(int dim) {
    return FlatSpace(dim, std::nullopt, {Matrix::Identity(dim, dim)});
}

FlatSpace FlatSpace::sign_group(int dim) {
    return FlatSpace(dim, std::nullopt, {Matrix::Identity(dim, dim), -Matrix::Identity(dim, dim)});
}

bool FlatSpace::contains(const Vector& x, double eps) const {
    if (x.size() != dim_) return false;
    return !constraint_ || std::abs(constraint_->dot(x)) <= eps;
}

// ---------------------------------------------------------------------------
// StructuredSet

StructuredSet StructuredSet::subspaces(int dim, const std::vector<Matrix>& spans,
                                       const Tolerance& tol) {
    SubspaceUnion u;
    for (const auto& S : spans) {
        if (S.rows() != dim) throw ContractViolation("structured set: basis row count != dim");
        if (!S.allFinite()) throw ContractViolation("structured set: non-finite basis");
        u.bases.push_back(S.cols() == 0 ? Matrix(dim, 0) : orthonormal_basis(S, tol));
    }
    StructuredSet C;
    C.dim = dim;
    C.data = std::move(u);
    return C;
}

StructuredSet StructuredSet::cones(int dim, const std::vector<Matrix>& systems,
                                   const Tolerance& tol) {
    ConeUnion u;
    for (const auto& A : systems) {
        if (A.cols() != dim) throw ContractViolation("structured set: inequality width != dim");
        u.cones.push_back(Cone::from_inequalities(A, tol));
    }
    StructuredSet C;
    C.dim = dim;
    C.data = std::move(u);
    return C;
}

StructuredSet StructuredSet::cloud(int dim, std::vector<Vector> points) {
    for (const auto& p : points) {
        if (p.size() != dim) throw ContractViolation("structured set: point size != dim");
        if (!p.allFinite()) throw ContractViolation("structured set: non-finite point");
    }
    StructuredSet C;
    C.dim = dim;
    C.data = PointCloud{std::move(points)};
    return C;
}

std::size_t StructuredSet::component_count() const {
    return std::visit(
        [](const auto& u) -> std::size_t {
            using T = std::decay_t<decltype(u)>;
            if constexpr (std::is_same_v<T, SubspaceUnion>) return u.bases.size();
            else if constexpr (std::is_same_v<T, ConeUnion>) return u.cones.size();
            else return u.points.size();
        },
        data);
}

bool StructuredSet::is_bounded() const {
    if (const auto* s = std::get_if<SubspaceUnion>(&data)) {
        return std::all_of(s->bases.begin(), s->bases.end(),
                           [](const Matrix& B) { return B.cols() == 0; });
    }
    if (const auto* c = std::get_if<ConeUnion>(&data)) {
        return std::all_of(c->cones.begin(), c->cones.end(),
                           [](const Cone& K) { return K.is_zero(); });
    }
    return true;
}

double HbiCertificate::intersection_radius(double r) const {
    if (!verdict) return std::numeric_limits<double>::infinity();
    return r / std::sin(gap);
}

// ---------------------------------------------------------------------------
// Distances

double dist_to_set(const Vector& x, const StructuredSet& C) {
    if (x.size() != C.dim) throw ContractViolation("dist_to_set: dimension mismatch");
    if (C.component_count() == 0) throw DomainError("dist_to_set: empty set");
    double best = std::numeric_limits<double>::infinity();
    if (const auto* s = std::get_if<SubspaceUnion>(&C.data)) {
        for (const auto& B : s->bases) {
            best = std::min(best, B.cols() == 0 ? x.norm() : (x - B * (B.transpose() * x)).norm());
        }
    } else if (const auto* c = std::get_if<ConeUnion>(&C.data)) {
        for (const auto& K : c->cones) best = std::min(best, cone_distance(K, x));
    } else {
        best = set_distance_from_cloud(x, std::get<PointCloud>(C.data));
    }
    return best;
}

bool neighborhood_member(const Vector& x, const StructuredSet& C, double r, const Tolerance& tol) {
    if (!(r >= 0.0)) throw ContractViolation("neighborhood_member: negative radius");
    return dist_to_set(x, C) <= r + tol.eps_geom;
}

// ---------------------------------------------------------------------------
// HBI

HbiCertificate hbi_decide(const StructuredSet& C1, const StructuredSet& C2, const Tolerance& tol) {
    require_structured(C1, "hbi_decide");
    require_structured(C2, "hbi_decide");
    require_same_dim(C1, C2, "hbi_decide");

    HbiCertificate cert;
    cert.gap = std::numbers::pi / 2;
    const std::size_t n1 = C1.component_count();
    const std::size_t n2 = C2.component_count();

    if (C1.is_subspaces() && C2.is_subspaces()) {
        const auto& b1 = std::get<SubspaceUnion>(C1.data).bases;
        const auto& b2 = std::get<SubspaceUnion>(C2.data).bases;
        bool first = true;
        for (std::size_t i = 0; i < n1; ++i) {
            for (std::size_t j = 0; j < n2; ++j) {
                const PairAngle a12 = principal_angle(b1[i], b2[j]);
                const PairAngle a21 = principal_angle(b2[j], b1[i]);
                const double s = std::min(a12.sin_min, a21.sin_min);
                if (s <= tol.eps_rank) {
                    cert.verdict = false;
                    cert.gap = 0.0;
                    Vector w = a12.direction;
                    fix_sign(w);
                    cert.witness = w;
                    cert.component1 = i;
                    cert.component2 = j;
                    return cert;
                }
                const double g = std::min(a12.angle, a21.angle);
                if (first || g < cert.gap) {
                    cert.gap = g;
                    cert.component1 = i;
                    cert.component2 = j;
                    first = false;
                }
            }
        }
        return cert;
    }

    cert.gap_exact = false;
    bool first = true;
    for (std::size_t i = 0; i < n1; ++i) {
        const Cone K1 = as_cone(C1, i, tol);
        for (std::size_t j = 0; j < n2; ++j) {
            const Cone K2 = as_cone(C2, j, tol);
            Matrix A(K1.ineqs.rows() + K2.ineqs.rows(), C1.dim);
            A << K1.ineqs, K2.ineqs;
            if (auto x = lp_nonzero_feasible(A, tol)) {
                cert.verdict = false;
                cert.gap = 0.0;
                Vector w = x->normalized();
                cert.witness = w;
                cert.component1 = i;
                cert.component2 = j;
                return cert;
            }
            const double delta = std::min(cone_separation_lower_bound(K1, K2),
                                          cone_separation_lower_bound(K2, K1));
            double g = std::asin(std::clamp(delta, 0.0, 1.0));
            if (!(g > 0.0)) g = std::numeric_limits<double>::min();
            if (first || g < cert.gap) {
                cert.gap = g;
                cert.component1 = i;
                cert.component2 = j;
                first = false;
            }
        }
    }
    return cert;
}

SampledHbi hbi_check_sampled(std::span<const Vector> P1, std::span<const Vector> P2, double r,
                             double R, double headroom) {
    if (!(R > 0.0)) throw ContractViolation("hbi_check_sampled: exploration radius must be positive");
    if (!(r >= 0.0)) throw ContractViolation("hbi_check_sampled: negative radius");
    if (!(headroom > 0.0 && headroom <= 1.0)) {
        throw ContractViolation("hbi_check_sampled: headroom must be in (0, 1]");
    }
    SampledHbi out;
    out.r = r;
    out.R = R;
    out.headroom = headroom;
    const auto m = kernels::max_matched_norm_parallel(P1, P2, r);
    out.max_norm = m.max_norm;
    out.empirically_hbi = m.index < 0 || m.max_norm < headroom * R;
    if (!out.empirically_hbi) out.offending = P1[static_cast<std::size_t>(m.index)];
    return out;
}

// ---------------------------------------------------------------------------
// Coarse equivalence

namespace {

struct Cover {
    bool all = true;
    bool split = false;  // some component only possibly covered by a union
    std::size_t component = 0;
    double sampled = 0.0;
};

Cover cover_subspaces(const SubspaceUnion& a, const SubspaceUnion& b, double eps) {
    Cover c;
    for (std::size_t i = 0; i < a.bases.size(); ++i) {
        const bool ok = std::any_of(b.bases.begin(), b.bases.end(), [&](const Matrix& B) {
            return subspace_contained(a.bases[i], B, eps);
        });
        if (!ok) {
            c.all = false;
            c.component = i;
            return c;
        }
    }
    return c;
}

Cover cover_cones(const StructuredSet& A, const StructuredSet& B, const Tolerance& tol) {
    Cover c;
    std::vector<Cone> bc;
    for (std::size_t j = 0; j < B.component_count(); ++j) bc.push_back(as_cone(B, j, tol));
    std::mt19937_64 rng(0x5eed);
    for (std::size_t i = 0; i < A.component_count(); ++i) {
        const Cone K = as_cone(A, i, tol);
        if (K.is_zero()) continue;
        const bool single = std::any_of(bc.begin(), bc.end(), [&](const Cone& L) {
            return K.subset_of(L, tol.eps_rank);
        });
        if (single) continue;
        // Unit directions of K at positive distance from every component of B
        // give rays diverging linearly from B.
        double worst = 0.0;
        for (const auto& u : component_directions(A, i, 4000, rng)) {
            double d = std::numeric_limits<double>::infinity();
            for (const auto& L : bc) d = std::min(d, cone_distance(L, u));
            worst = std::max(worst, d);
        }
        if (bc.empty() || worst > 1e-6) {
            c.all = false;
            c.split = false;
            c.component = i;
            return c;
        }
        c.split = true;
        c.component = i;
        c.sampled = std::max(c.sampled, worst);
    }
    return c;
}

}  // namespace

SimResult sim_decide(const StructuredSet& C1, const StructuredSet& C2, const Tolerance& tol) {
    require_structured(C1, "sim_decide");
    require_structured(C2, "sim_decide");
    require_same_dim(C1, C2, "sim_decide");
    SimResult out;
    if (C1.is_subspaces() && C2.is_subspaces()) {
        const auto& a = std::get<SubspaceUnion>(C1.data);
        const auto& b = std::get<SubspaceUnion>(C2.data);
        const Cover c12 = cover_subspaces(a, b, tol.eps_rank);
        if (!c12.all) {
            out.value = Decision::no;
            out.uncovered_side = 1;
            out.uncovered_component = c12.component;
            return out;
        }
        const Cover c21 = cover_subspaces(b, a, tol.eps_rank);
        if (!c21.all) {
            out.value = Decision::no;
            out.uncovered_side = 2;
            out.uncovered_component = c21.component;
            return out;
        }
        out.value = Decision::yes;
        return out;
    }
    const Cover c12 = cover_cones(C1, C2, tol);
    if (!c12.all) {
        out.value = Decision::no;
        out.uncovered_side = 1;
        out.uncovered_component = c12.component;
        return out;
    }
    const Cover c21 = cover_cones(C2, C1, tol);
    if (!c21.all) {
        out.value = Decision::no;
        out.uncovered_side = 2;
        out.uncovered_component = c21.component;
        return out;
    }
    if (c12.split || c21.split) {
        out.value = Decision::undecided;
        out.uncovered_side = c12.split ? 1 : 2;
        out.uncovered_component = c12.split ? c12.component : c21.component;
        out.sampled_hausdorff = std::max(c12.sampled, c21.sampled);
        return out;
    }
    out.value = Decision::yes;
    return out;
}

// ---------------------------------------------------------------------------
// Separating sequences

std::vector<Vector> separating_witness(const StructuredSet& C1, const StructuredSet& C2, int n_max,
                                       const Tolerance& tol) {
    require_same_dim(C1, C2, "separating_witness");
    if (n_max < 0) throw ContractViolation("separating_witness: n_max must be nonnegative");
    if (C2.component_count() == 0) throw DomainError("separating_witness: empty second set");
    std::vector<Vector> out;

    if (const auto* cloud = std::get_if<PointCloud>(&C1.data)) {
        std::vector<std::pair<double, std::size_t>> order;
        for (std::size_t k = 0; k < cloud->points.size(); ++k) {
            order.emplace_back(cloud->points[k].norm(), k);
        }
        std::sort(order.begin(), order.end());
        std::vector<double> dist(order.size());
        for (std::size_t k = 0; k < order.size(); ++k) {
            dist[k] = dist_to_set(cloud->points[order[k].second], C2);
        }
        for (int n = 0; n <= n_max; ++n) {
            bool found = false;
            for (std::size_t k = 0; k < order.size(); ++k) {
                if (dist[k] > n + tol.eps_geom) {
                    out.push_back(cloud->points[order[k].second]);
                    found = true;
                    break;
                }
            }
            if (!found) {
                throw WitnessNotFound("separating_witness: no sampled point of the first set is farther than " +
                                      std::to_string(n) + " from the second");
            }
        }
        return out;
    }

    if (C2.is_cloud()) {
        double reach = 0.0;
        for (const auto& p : std::get<PointCloud>(C2.data).points) reach = std::max(reach, p.norm());
        std::mt19937_64 rng(0x5eed);
        for (std::size_t i = 0; i < C1.component_count(); ++i) {
            const auto dirs = component_directions(C1, i, 0, rng);
            if (dirs.empty()) continue;
            for (int n = 0; n <= n_max; ++n) out.push_back((n + 1.0 + reach) * dirs.front());
            return out;
        }
        throw WitnessNotFound("separating_witness: first set is bounded");
    }

    std::mt19937_64 rng(0x5eed);
    Vector best_u;
    double best_delta = 0.0;
    for (std::size_t i = 0; i < C1.component_count(); ++i) {
        std::vector<Vector> cand = component_directions(C1, i, 256, rng);
        // directions of a subspace farthest from each subspace of C2
        if (const auto* s1 = std::get_if<SubspaceUnion>(&C1.data)) {
            if (const auto* s2 = std::get_if<SubspaceUnion>(&C2.data)) {
                for (const auto& B2 : s2->bases) {
                    const Matrix& B1 = s1->bases[i];
                    if (B1.cols() == 0) continue;
                    const Matrix M = B2.cols() == 0 ? B1 : Matrix(B1 - B2 * (B2.transpose() * B1));
                    Eigen::JacobiSVD<Matrix> js(M, Eigen::ComputeFullV);
                    const Vector u = (B1 * js.matrixV().col(0)).normalized();
                    cand.push_back(u);
                    cand.push_back(-u);
                }
            }
        }
        for (const auto& u : cand) {
            const double delta = dist_to_set(u, C2);
            if (delta > best_delta + 1e-15) {
                best_delta = delta;
                best_u = u;
            }
        }
    }
    if (best_delta <= tol.eps_rank) {
        throw WitnessNotFound("separating_witness: the first set lies within bounded distance of the second");
    }
    fix_sign(best_u);
    for (int n = 0; n <= n_max; ++n) out.push_back(((n + 1.0) / best_delta) * best_u);
    return out;
}

// ---------------------------------------------------------------------------
// Saturation

StructuredSet symmetrize(const StructuredSet& C, const FlatSpace& space, const Tolerance& tol) {
    if (C.dim != space.dim()) throw ContractViolation("symmetrize: dimension mismatch");
    StructuredSet out;
    out.dim = C.dim;
    out.word_budget = C.word_budget;
    out.w_saturated = true;
    const auto& G = space.group();

    if (const auto* s = std::get_if<SubspaceUnion>(&C.data)) {
        SubspaceUnion u;
        auto add = [&](const Matrix& B) {
            for (const auto& E : u.bases) {
                if (E.cols() == B.cols() && subspace_contained(B, E, tol.eps_rank) &&
                    subspace_contained(E, B, tol.eps_rank)) {
                    return;
                }
            }
            u.bases.push_back(B);
        };
        for (const auto& B : s->bases) add(B);
        for (const auto& w : G) {
            for (const auto& B : s->bases) add(w * B);
        }
        out.data = std::move(u);
    } else if (const auto* c = std::get_if<ConeUnion>(&C.data)) {
        ConeUnion u;
        auto add = [&](const Cone& K) {
            for (const auto& E : u.cones) {
                if (K.subset_of(E, tol.eps_rank) && E.subset_of(K, tol.eps_rank)) return;
            }
            u.cones.push_back(K);
        };
        for (const auto& K : c->cones) add(K);
        for (const auto& w : G) {
            for (const auto& K : c->cones) add(K.transformed(w));
        }
        out.data = std::move(u);
    } else {
        const auto& pts = std::get<PointCloud>(C.data).points;
        PointCloud u;
        // permuted coordinates are bitwise copies, so a rounded key suffices
        std::unordered_set<std::string> seen;
        auto add = [&](const Vector& p) {
            std::string key;
            for (Eigen::Index k = 0; k < p.size(); ++k) {
                long long q = std::llround(p[k] / tol.eps_geom);
                key += std::to_string(q == 0 ? 0 : q);
                key += ',';
            }
            if (seen.insert(key).second) u.points.push_back(p);
        };
        for (const auto& p : pts) add(p);
        for (const auto& w : G) {
            for (const auto& p : pts) add(w * p);
        }
        out.data = std::move(u);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sampling

std::vector<Vector> sample_set(const StructuredSet& C, const SamplingPlan& plan) {
    if (!(plan.radius >= 0.0) || !(plan.radial_step > 0.0) || plan.directions < 1) {
        throw ContractViolation("sample_set: invalid plan");
    }
    std::vector<double> radii;
    if (plan.radial_ratio > 1.0) {
        for (double r = plan.radial_step; r <= plan.radius * (1 + 1e-12); r *= plan.radial_ratio) {
            radii.push_back(std::min(r, plan.radius));
        }
    } else {
        const auto steps = static_cast<long>(std::floor(plan.radius / plan.radial_step + 1e-9));
        for (long k = 1; k <= steps; ++k) radii.push_back(static_cast<double>(k) * plan.radial_step);
    }

    std::vector<Vector> out;
    auto push = [&](Vector v) {
        if (out.size() >= plan.max_points) {
            throw BudgetExceeded("sample_set: point budget exceeded", plan.max_points + 1);
        }
        out.push_back(std::move(v));
    };
    auto push_rays = [&](const std::vector<Vector>& dirs) {
        for (const auto& u : dirs) {
            for (double r : radii) push(r * u);
        }
    };

    if (const auto* cloud = std::get_if<PointCloud>(&C.data)) {
        for (const auto& p : cloud->points) {
            if (p.norm() <= plan.radius) push(p);
        }
        return out;
    }

    push(Vector::Zero(C.dim));
    std::mt19937_64 rng(plan.seed);
    std::normal_distribution<double> gauss;
    for (std::size_t i = 0; i < C.component_count(); ++i) {
        std::vector<Vector> dirs;
        if (const auto* s = std::get_if<SubspaceUnion>(&C.data)) {
            const Matrix& B = s->bases[i];
            if (B.cols() == 1) {
                dirs = {B.col(0), -B.col(0)};
            } else if (B.cols() == 2) {
                for (int j = 0; j < plan.directions; ++j) {
                    const double t = 2.0 * std::numbers::pi * j / plan.directions;
                    dirs.push_back(std::cos(t) * B.col(0) + std::sin(t) * B.col(1));
                }
            } else if (B.cols() > 2) {
                const long count = static_cast<long>(plan.directions) * B.cols();
                for (long j = 0; j < count; ++j) {
                    Vector c(B.cols());
                    for (Eigen::Index k = 0; k < B.cols(); ++k) c[k] = gauss(rng);
                    dirs.push_back((B * c).normalized());
                }
            }
        } else {
            dirs = component_directions(C, i, plan.directions, rng);
        }
        push_rays(dirs);
    }
    return out;
}

}  // namespace propcrit
