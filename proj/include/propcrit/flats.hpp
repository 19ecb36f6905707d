#pragma once

// Set calculus on a flat space R^d acted on by a finite orthogonal group:
// closed neighborhoods, bounded-intersection (HBI) decisions and coarse
// equivalence for finite unions of subspaces, polyhedral cones and point clouds.

#include "propcrit/numerics.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace propcrit {

/// Polyhedral cone {x : ineqs * x >= 0} together with its generators.
/// Rays are unit columns orthogonal to the lineality space.
struct Cone {
    Matrix ineqs;
    Matrix rays;
    Matrix lineality;

    /// Double-description conversion; ambient dimension must be <= 6.
    static Cone from_inequalities(const Matrix& A, const Tolerance& tol = {});
    static Cone from_subspace(const Matrix& basis, const Tolerance& tol = {});

    Eigen::Index dim() const { return ineqs.cols(); }
    bool is_zero() const { return rays.cols() == 0 && lineality.cols() == 0; }
    bool contains(const Vector& x, double eps) const;
    /// True if every generator of this cone lies in `other`.
    bool subset_of(const Cone& other, double eps) const;
    /// Generators as a plain list: rays plus +-lineality vectors.
    Matrix generator_matrix() const;
    Cone transformed(const Matrix& w) const;
};

double cone_distance(const Cone& K, const Vector& x);

class FlatSpace {
public:
    /// Validates orthogonality, closure under products and inverses (table
    /// completion), and that every element preserves the constraint kernel.
    FlatSpace(int dim, std::optional<Vector> constraint, std::vector<Matrix> group,
              const Tolerance& tol = {});

    /// All n! coordinate permutations; the sum-zero constraint when requested.
    static FlatSpace permutations(int n, bool sum_zero, const Tolerance& tol = {});
    static FlatSpace trivial(int dim);
    static FlatSpace sign_group(int dim);

    int dim() const { return dim_; }
    const std::optional<Vector>& constraint() const { return constraint_; }
    const std::vector<Matrix>& group() const { return group_; }
    bool contains(const Vector& x, double eps) const;

private:
    int dim_;
    std::optional<Vector> constraint_;
    std::vector<Matrix> group_;
};

struct SubspaceUnion {
    std::vector<Matrix> bases;  // d x k orthonormal columns; k = 0 is the zero subspace
};

struct ConeUnion {
    std::vector<Cone> cones;
};

struct PointCloud {
    std::vector<Vector> points;
};

struct StructuredSet {
    int dim = 0;
    std::variant<SubspaceUnion, ConeUnion, PointCloud> data;
    bool w_saturated = false;
    /// Set when the cloud came from a finite word-ball enumeration; the
    /// value is the word length. Such sets are never fed to exact decisions.
    std::optional<int> word_budget;

    /// Spanning sets are orthonormalized; a zero-column matrix is {0}.
    static StructuredSet subspaces(int dim, const std::vector<Matrix>& spans,
                                   const Tolerance& tol = {});
    static StructuredSet cones(int dim, const std::vector<Matrix>& systems,
                               const Tolerance& tol = {});
    static StructuredSet cloud(int dim, std::vector<Vector> points);

    bool is_cloud() const { return std::holds_alternative<PointCloud>(data); }
    bool is_subspaces() const { return std::holds_alternative<SubspaceUnion>(data); }
    bool is_cones() const { return std::holds_alternative<ConeUnion>(data); }
    std::size_t component_count() const;
    /// Bounded sets: clouds, and unions whose components are all {0}.
    bool is_bounded() const;
    bool is_empirical() const { return word_budget.has_value(); }
};

struct HbiCertificate {
    bool verdict = true;
    /// Smallest principal angle over component pairs (radians). For cone
    /// pairs a certified lower bound. Zero when the verdict is false.
    double gap = 0.0;
    bool gap_exact = true;
    std::optional<Vector> witness;  // unit vector shared by the offending pair
    std::size_t component1 = 0;
    std::size_t component2 = 0;

    /// Radius of a ball around 0 containing C1 cap N_r(C2); only meaningful
    /// when verdict is true.
    double intersection_radius(double r) const;
};

double dist_to_set(const Vector& x, const StructuredSet& C);
bool neighborhood_member(const Vector& x, const StructuredSet& C, double r,
                         const Tolerance& tol = {});

/// Exact HBI decision for structured variants (subspace or cone unions).
/// Throws DomainError if either input is a point cloud.
HbiCertificate hbi_decide(const StructuredSet& C1, const StructuredSet& C2,
                          const Tolerance& tol = {});

struct SampledHbi {
    bool empirically_hbi = true;
    double max_norm = 0.0;             // among points of P1 within r of P2
    std::optional<Vector> offending;   // the point realizing max_norm when not HBI
    double r = 0.0;
    double R = 0.0;
    double headroom = 0.5;
};

/// Empirical check: HBI up to R if every point of P1 within r of P2 has norm < headroom * R.
SampledHbi hbi_check_sampled(std::span<const Vector> P1, std::span<const Vector> P2, double r,
                             double R, double headroom = 0.5);

enum class Decision { no, yes, undecided };

struct SimResult {
    Decision value = Decision::undecided;
    /// Side (1 or 2) holding a component that is not contained in the other set.
    int uncovered_side = 0;
    std::size_t uncovered_component = 0;
    /// For undecided cone covers: largest distance to the other set over sampled unit directions.
    std::optional<double> sampled_hausdorff;
};

/// Coarse equivalence (finite Hausdorff distance) of structured sets.
SimResult sim_decide(const StructuredSet& C1, const StructuredSet& C2, const Tolerance& tol = {});

/// Points p_0..p_{n_max} of C1 with dist(p_n, C2) > n (the separating sequence
/// used to show that non-equivalent sets have different HBI partners).
/// Throws WitnessNotFound if C1 lies within bounded distance of C2.
std::vector<Vector> separating_witness(const StructuredSet& C1, const StructuredSet& C2,
                                       int n_max, const Tolerance& tol = {});

/// Union of w.C over the group, duplicates removed; marks the result saturated.
StructuredSet symmetrize(const StructuredSet& C, const FlatSpace& space, const Tolerance& tol = {});

/// Deterministic sample of a structured set inside the ball of radius `radius`.
struct SamplingPlan {
    double radius = 1.0;
    double radial_step = 0.1;   // linear spacing when radial_ratio <= 1
    double radial_ratio = 0.0;  // geometric spacing from radial_step when > 1
    int directions = 64;        // per 2-dimensional component; also cone combinations
    std::uint64_t seed = 0;     // directions in components of dimension >= 3
    std::size_t max_points = 5'000'000;
};

std::vector<Vector> sample_set(const StructuredSet& C, const SamplingPlan& plan);

}  // namespace propcrit
