#pragma once

// Orbit quotients K\M for two concrete models, their sections and the
// saturation operator Theta.
//
// EuclideanOrth: M = R^n, K = O(n); section the line R.e1, Weyl group {+-1}.
// PosDefConj: M = det-1 SPD matrices, K = SO(n) acting by congruence; section
// the positive diagonal matrices exp(diag x) with x in the sum-zero plane, Weyl
// group S_n. Points of the section are handled through their flat coordinate x.

#include "propcrit/cartan.hpp"
#include "propcrit/numerics.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

namespace propcrit {

struct EuclideanOrth {
    int n = 2;
};
struct PosDefConj {
    int n = 2;
};
using QuotientModel = std::variant<EuclideanOrth, PosDefConj>;

int model_size(const QuotientModel& m);
/// Dimension of the section's flat coordinate: 1, resp. n.
int section_dim(const QuotientModel& m);

struct OrbitPoint {
    QuotientModel model;
    Vector canonical;  // norm, resp. descending log-eigenvalues
};

/// Affine-invariant metric ||log(p^{-1/2} q p^{-1/2})||_F.
double pdist(const Matrix& p, const Matrix& q, const Tolerance& tol = {});

/// Model metric on points (column vector for EuclideanOrth, matrix for PosDefConj).
double model_distance(const QuotientModel& m, const Matrix& p, const Matrix& q, const Tolerance& tol = {});
/// k acting on a point: k x, resp. k p k^T.
Matrix act(const QuotientModel& m, const Matrix& k, const Matrix& p);
Matrix base_point(const QuotientModel& m);

OrbitPoint orbit_of(const QuotientModel& m, const Matrix& p, const Tolerance& tol = {});

/// d^K: |‖x‖ − ‖y‖|, resp. min over permutations w of ‖λ − w μ‖.
double quotient_distance(const OrbitPoint& a, const OrbitPoint& b);

/// iota: flat coordinate of the section to a model point.
Matrix section_point(const QuotientModel& m, const Vector& x);
/// eta restricted to the section: the canonical form of iota(x).
Vector section_canonical(const QuotientModel& m, const Vector& x);
/// Some section coordinate whose canonical form is c (the chamber representative).
Vector section_lift(const QuotientModel& m, const Vector& c);

/// The Weyl orbit W.x of a section coordinate.
std::vector<Vector> orbit_section_intersection(const QuotientModel& m, const Vector& x);
/// Theta(C) = eta^{-1}(eta(C)) = W.C, duplicates removed (first occurrence order).
std::vector<Vector> theta(const QuotientModel& m, std::span<const Vector> C);

struct SectionCheck {
    std::size_t samples = 0;
    std::size_t near_section = 0;
    std::size_t stray = 0;
    double worst_offset = 0.0;  // largest distance from a near-section sample to W.x
};

/// Samples K.p for p = iota(x) and checks that every sample within `near` of
/// the section lies within `tolerance` of W.x. n = 2 uses the full SO(2) net at
/// `mesh`; larger n use seeded random rotations plus Jacobi-sweep iterates that
/// are driven towards the section.
SectionCheck validate_orbit_section(const PosDefConj& m, const Vector& x, double mesh, double near,
                                    double tolerance, std::uint64_t seed);

struct NonexpandingReport {
    std::size_t samples = 0;
    double max_condition1_violation = 0.0;  // max of d^K(eta x, eta y) - d(x, y)
    double max_condition2_residual = 0.0;   // max |d(x, y) - d^K(eta x, y')| over realizers y
};

/// Random pairs in the section, random quotient targets y', constructive realizers.
NonexpandingReport verify_nonexpanding_conditions(const QuotientModel& m, std::size_t samples,
                                                  std::uint64_t seed, const Tolerance& tol = {});

struct LemmaReport {
    std::size_t probes = 0;
    std::size_t counterexamples = 0;
    std::optional<Vector> first_counterexample;
    double worst_discrepancy = 0.0;  // between the two sides' distance evaluations
};

/// Both inclusions of eta^{-1}(N_r(C')) = N_r(eta^{-1}(C')) and
/// eta(N_r(C)) = N_r(eta(C)) on sampled probes. C is a finite set of section
/// coordinates, Cq a finite set of canonical forms.
LemmaReport verify_lemma_neighborhoods(const QuotientModel& m, std::span<const Vector> C,
                                       std::span<const Vector> Cq, double r, std::size_t probes,
                                       std::uint64_t seed, const Tolerance& tol = {});

/// Factor-2 convention between a-coordinates and log-eigenvalues of g g^T.
Vector cartan_to_canonical(const Vector& a);
Vector canonical_to_cartan(const Vector& c);

/// The orbit K.(g g^T); canonical = 2 cartan_projection(g).
OrbitPoint mu(const Matrix& g, const PosDefConj& m, const Tolerance& tol = {});

/// Sigma(H) in section coordinates: the saturated Cartan image under the factor-2 map.
StructuredSet sigma_of_subgroup(const AmbientGroup& G, const SubgroupSpec& spec, int word_length = 4,
                                const Tolerance& tol = {});

/// Random Haar-distributed element of SO(n).
Matrix random_rotation(int n, std::mt19937_64& rng);

}  // namespace propcrit
