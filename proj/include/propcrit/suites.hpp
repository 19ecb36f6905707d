#pragma once

// Randomized verification sweeps. Each returns a SuiteReport whose checks
// carry the worst observed value and the threshold it was held to; every
// sweep is driven by a single seeded generator.

#include "propcrit/properness.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace propcrit {

/// Random element of SL(n): Gaussian entries, sign and scale fixed so det = 1.
Matrix random_sl(int n, std::mt19937_64& rng);

/// KAK on `per_n` random SL(n) elements for n = 2..6.
SuiteReport kak_suite(std::size_t per_n = 1000, std::uint64_t seed = 0);

/// mu(g^-1) = reverse(-mu(g)), bi-K-invariance and the Lipschitz bound.
SuiteReport cartan_laws_suite(std::size_t pairs = 1000, std::uint64_t seed = 0);

/// hbi_decide against hbi_check_sampled on random subspace unions in R^3 / R^4,
/// plus the r / sin(gap) certificate bound at r in {1, 10, 100}.
SuiteReport hbi_agreement_suite(std::size_t instances = 200, std::uint64_t seed = 0);

/// The separating sequence C' of a non-equivalent pair: not HBI with C1, HBI with C2.
SuiteReport separating_witness_suite(std::size_t pairs = 50, std::uint64_t seed = 0);

/// Non-expanding conditions, the neighborhood lemma and four-condition agreement.
SuiteReport quotient_suite(std::size_t samples = 1000, std::size_t probes = 500,
                           std::size_t configs = 100, std::uint64_t seed = 0);

/// Comparison triangles on every model and the asymptotic-ray bound.
SuiteReport cat0_suite(std::size_t checks = 10'000, std::size_t rays = 500, std::uint64_t seed = 0);

/// Property (S) witnesses on Euclidean, hyperbolic and flat x hyperbolic models.
SuiteReport property_s_suite(std::size_t triples = 500, std::uint64_t seed = 0);

/// (K.p) cap Sigma = W.p on P(n), n = 2..max_n, for `points` random p per n.
SuiteReport section_suite(std::size_t points = 100, double mesh = 1e-2, int max_n = 4,
                          std::uint64_t seed = 0);

/// End-to-end decisions on the fixed golden problems, including cross-validation.
SuiteReport golden_suite(std::uint64_t seed = 0);

/// The SL(2) golden problems fed to cross-validation.
std::vector<std::pair<std::string, PropernessProblem>> sl2_goldens();

std::vector<std::string> suite_names();
/// Runs a suite by name; `samples` (0 = default) scales the main sample count.
SuiteReport run_suite(const std::string& name, std::size_t samples, std::uint64_t seed);

}  // namespace propcrit
