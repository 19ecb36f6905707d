#pragma once

// Hot loops with two implementations each: a plain serial reference kept for
// testing, and the production version (spatial index and/or OpenMP).
// Both return identical results; ties are broken by smallest input index.

#include "propcrit/numerics.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace propcrit::kernels {

/// Number of OpenMP threads available, 1 when built without OpenMP.
int max_threads();

struct MatchResult {
    double max_norm = 0.0;
    std::ptrdiff_t index = -1;  // into the query span; -1 when nothing matched
};

/// Largest ||q|| over queries q with some target t, ||q - t|| <= r.
MatchResult max_matched_norm_serial(std::span<const Vector> queries,
                                    std::span<const Vector> targets, double r);
/// Grid-hashed targets, queries visited in descending norm with early exit.
MatchResult max_matched_norm_parallel(std::span<const Vector> queries,
                                      std::span<const Vector> targets, double r);

std::vector<Vector> cartan_projection_batch_serial(std::span<const Matrix> gs);
std::vector<Vector> cartan_projection_batch_parallel(std::span<const Matrix> gs);

/// Capture test for brute-force properness: entry i is true iff some
/// (h2, d) with ||mu(h1_i * d * h2^{-1})|| <= bound. Pairs are prefiltered
/// with ||mu(h1) - mu(h2)|| <= prefilter (Lipschitz bound), mu taken from the inputs.
struct CaptureInput {
    std::span<const Matrix> h1;
    std::span<const Vector> mu1;
    std::span<const Matrix> h2_inv;
    std::span<const Vector> mu2;
    std::span<const Matrix> net;
    double bound = 0.0;
    double prefilter = 0.0;
};

std::vector<char> capture_scan_serial(const CaptureInput& in);
std::vector<char> capture_scan_parallel(const CaptureInput& in);

}  // namespace propcrit::kernels
