#pragma once

// Properness of a pair (H1, H2) of subgroups of GL(N,R) / SL(N,R), decided by
// whether the Weyl-saturated Cartan images have bounded intersections.

#include "propcrit/cartan.hpp"
#include "propcrit/flats.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace propcrit {

enum class Mode { exact, sampled, automatic };

const char* mode_name(Mode m);
Mode parse_mode(const std::string& s);

struct Budgets {
    int word_length = 4;        // L, discrete word balls
    double radius = 1000.0;     // R, exploration radius of sampled checks
    double rho = 1.0;           // compact thickening D_rho
    double mesh = 0.2;          // net mesh for brute force
    double probe_radius = 1.0;  // r, neighborhood radius of sampled checks
    double headroom = 0.5;      // theta
    std::size_t samples = 1000;

    void validate() const;
};

struct PropernessProblem {
    AmbientGroup ambient{GroupKind::SL, 2};
    SubgroupSpec h1;
    SubgroupSpec h2;
    Mode mode = Mode::automatic;
    Budgets budgets;
    std::uint64_t seed = 0;

    void validate(const Tolerance& tol = {}) const;
};

struct ProperVerdict {
    HbiCertificate certificate;  // gap = +inf when a Cartan image is bounded
    /// Set when one Cartan image is bounded; its largest norm.
    std::optional<double> bounded_norm;
};
struct NotProperVerdict {
    Vector witness;
    std::size_t component1 = 0;
    std::size_t component2 = 0;
};
struct EmpiricalProperVerdict {
    double R = 0.0;
    int L = 0;
    double r = 0.0;
    double max_norm = 0.0;
};
struct EmpiricalNotProperVerdict {
    double R = 0.0;
    int L = 0;
    double r = 0.0;
    double max_norm = 0.0;
    Vector witness;  // offending Cartan point
};
struct UndecidedVerdict {
    std::string reason;
};

using Verdict = std::variant<ProperVerdict, NotProperVerdict, EmpiricalProperVerdict,
                             EmpiricalNotProperVerdict, UndecidedVerdict>;

const char* verdict_kind(const Verdict& v);
/// Proper or EmpiricalProper -> yes; NotProper or EmpiricalNotProper -> no.
Decision verdict_properness(const Verdict& v);

/// Resolves Mode::automatic: exact when neither spec is discrete.
Mode effective_mode(const PropernessProblem& p);

Verdict decide(const PropernessProblem& p, const Tolerance& tol = {});

struct EquivalenceVerdict {
    Decision sim = Decision::undecided;
    std::string basis;  // which condition was evaluated
    std::optional<double> sampled_hausdorff;
};

/// H1 ~ H2, settled through coarse equivalence of the Cartan images.
EquivalenceVerdict decide_equivalence(const PropernessProblem& p, const Tolerance& tol = {});

struct CalabiMarkusReport {
    int ambient_rank = 0;
    int subgroup_rank = 0;
    bool admits_infinite_discontinuous = false;
    std::string statement;
};

CalabiMarkusReport calabi_markus(const AmbientGroup& G, const SubgroupSpec& H, const Tolerance& tol = {});

/// Elements of H used by brute force: word balls, powers exp(kX) with |k| <= L,
/// lattice points of the Cartan generators, or the listed elements.
std::vector<Matrix> enumerate_elements(const AmbientGroup& G, const SubgroupSpec& spec, int L,
                                       std::size_t max_elements = 10'000);

struct BruteForceReport {
    std::size_t h1_count = 0;
    std::size_t h2_count = 0;
    std::size_t net_size = 0;
    std::size_t captured = 0;
    double max_captured_norm = 0.0;  // ||mu|| over captured h1
    double frontier = 0.0;           // ||mu|| over all enumerated h1
    /// yes: captured norms stay below headroom * frontier; no: they reach it;
    /// undecided: the frontier is inside the thickening itself.
    Decision bounded_away = Decision::undecided;
};

/// h1 counts as captured in D.H2.D^{-1} when ||mu(h1 d h2^{-1})|| <= rho/2 + mesh
/// for some net element d and enumerated h2.
BruteForceReport brute_force_properness(const PropernessProblem& p, const CompactNetD& net,
                                        const Tolerance& tol = {});

struct CrossValidation {
    std::optional<Verdict> exact;
    Verdict sampled;
    BruteForceReport brute;
    bool consistent = false;
    std::string detail;
};

CrossValidation cross_validate(const PropernessProblem& p, const Tolerance& tol = {});

// ---------------------------------------------------------------------------
// Verification suites

struct SuiteCheck {
    std::string name;
    bool pass = false;
    double worst = 0.0;
    double threshold = 0.0;
    std::size_t count = 0;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<SuiteCheck> checks;
    bool pass() const;
};

struct TheoremSuiteConfig {
    int n = 2;                    // P(n), n <= 3
    std::size_t configs = 100;    // random cloud configurations for the four-condition check
    std::size_t samples = 1000;   // sampled elements for the saturation lemma
    double r = 0.5;
    std::uint64_t seed = 0;
};

/// Four-condition agreement, the saturation lemma K.H.D_r and the
/// neighborhood lemma with its achieved tau.
SuiteReport theorem_suite(const TheoremSuiteConfig& cfg, const Tolerance& tol = {});

}  // namespace propcrit
