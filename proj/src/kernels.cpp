#include "propcrit/kernels.hpp"

#include "propcrit/cartan.hpp"
#include "propcrit/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#ifdef PROPCRIT_HAVE_OPENMP
#include <omp.h>
#endif

namespace propcrit::kernels {
namespace {

constexpr int kMaxGridDim = 6;

struct CellKey {
    std::array<long long, kMaxGridDim> c{};
    bool operator==(const CellKey& o) const { return c == o.c; }
};

struct CellHash {
    std::size_t operator()(const CellKey& k) const {
        std::size_t h = 1469598103934665603ull;
        for (long long v : k.c) {
            h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

CellKey cell_of(const Vector& p, double cell) {
    CellKey k;
    for (Eigen::Index i = 0; i < p.size(); ++i) k.c[static_cast<std::size_t>(i)] = static_cast<long long>(std::floor(p[i] / cell));
    return k;
}

bool within(const Vector& a, const Vector& b, double r2) { return (a - b).squaredNorm() <= r2; }

double cartan_norm(const Matrix& g) {
    if (g.rows() == 2 && g.cols() == 2) {
        // singular values of a 2x2 matrix from its Frobenius norm and determinant
        const double f = g.squaredNorm();
        const double det = std::abs(g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0));
        const double disc = std::sqrt(std::max(0.0, (f - 2.0 * det) * (f + 2.0 * det)));
        const double s1sq = 0.5 * (f + disc);
        const double l1 = 0.5 * std::log(s1sq);
        const double l2 = std::log(det) - l1;
        return std::hypot(l1, l2);
    }
    Eigen::JacobiSVD<Matrix> js(g);
    return js.singularValues().array().log().matrix().norm();
}

}  // namespace

int max_threads() {
#ifdef PROPCRIT_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

MatchResult max_matched_norm_serial(std::span<const Vector> queries, std::span<const Vector> targets,
                                    double r) {
    MatchResult out;
    const double r2 = r * r;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const double n = queries[i].norm();
        if (out.index >= 0 && n <= out.max_norm) continue;
        for (const auto& t : targets) {
            if (within(queries[i], t, r2)) {
                out.max_norm = n;
                out.index = static_cast<std::ptrdiff_t>(i);
                break;
            }
        }
    }
    return out;
}

MatchResult max_matched_norm_parallel(std::span<const Vector> queries, std::span<const Vector> targets,
                                      double r) {
    MatchResult out;
    if (queries.empty() || targets.empty()) return out;
    const Eigen::Index d = queries.front().size();
    if (d > kMaxGridDim) return max_matched_norm_serial(queries, targets, r);

    const double cell = std::max(r, 1e-9);
    const double r2 = r * r;
    std::unordered_map<CellKey, std::vector<std::uint32_t>, CellHash> grid;
    grid.reserve(targets.size());
    for (std::size_t j = 0; j < targets.size(); ++j) grid[cell_of(targets[j], cell)].push_back(static_cast<std::uint32_t>(j));

    std::vector<std::pair<double, std::size_t>> order(queries.size());
    for (std::size_t i = 0; i < queries.size(); ++i) order[i] = {queries[i].norm(), i};
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        return a.first > b.first || (a.first == b.first && a.second < b.second);
    });

    long offsets = 1;
    for (Eigen::Index k = 0; k < d; ++k) offsets *= 3;

    auto matched = [&](const Vector& q) {
        const CellKey base = cell_of(q, cell);
        for (long o = 0; o < offsets; ++o) {
            CellKey k = base;
            long rem = o;
            for (Eigen::Index a = 0; a < d; ++a) {
                k.c[static_cast<std::size_t>(a)] += rem % 3 - 1;
                rem /= 3;
            }
            const auto it = grid.find(k);
            if (it == grid.end()) continue;
            for (std::uint32_t j : it->second) {
                if (within(q, targets[j], r2)) return true;
            }
        }
        return false;
    };

    constexpr std::size_t kChunk = 512;
    for (std::size_t start = 0; start < order.size(); start += kChunk) {
        const std::size_t stop = std::min(order.size(), start + kChunk);
        constexpr std::ptrdiff_t kNone = std::numeric_limits<std::ptrdiff_t>::max();
        std::ptrdiff_t first = kNone;
        const long count = static_cast<long>(stop - start);
#ifdef PROPCRIT_HAVE_OPENMP
#pragma omp parallel for schedule(static) reduction(min : first) if (count > 64)
#endif
        for (long t = 0; t < count; ++t) {
            const std::size_t pos = start + static_cast<std::size_t>(t);
            if (matched(queries[order[pos].second])) {
                const auto p = static_cast<std::ptrdiff_t>(pos);
                if (p < first) first = p;
            }
        }
        if (first != kNone) {
            out.max_norm = order[static_cast<std::size_t>(first)].first;
            out.index = static_cast<std::ptrdiff_t>(order[static_cast<std::size_t>(first)].second);
            return out;
        }
    }
    return out;
}

std::vector<Vector> cartan_projection_batch_serial(std::span<const Matrix> gs) {
    std::vector<Vector> out;
    out.reserve(gs.size());
    for (const auto& g : gs) out.push_back(cartan_projection(g));
    return out;
}

std::vector<Vector> cartan_projection_batch_parallel(std::span<const Matrix> gs) {
    std::vector<Vector> out(gs.size());
    const long n = static_cast<long>(gs.size());
    bool failed = false;
#ifdef PROPCRIT_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = cartan_projection(gs[static_cast<std::size_t>(i)]);
        } catch (...) {
#ifdef PROPCRIT_HAVE_OPENMP
#pragma omp atomic write
#endif
            failed = true;
        }
    }
    if (failed) return cartan_projection_batch_serial(gs);  // rethrows the first failure in order
    return out;
}

namespace {

bool captured_one(const CaptureInput& in, std::size_t i) {
    // nearest Cartan projections first: captures are found early
    std::vector<std::pair<double, std::size_t>> cand;
    for (std::size_t j = 0; j < in.h2_inv.size(); ++j) {
        const double gap = (in.mu1[i] - in.mu2[j]).norm();
        if (gap <= in.prefilter) cand.emplace_back(gap, j);
    }
    std::sort(cand.begin(), cand.end());
    for (const auto& [gap, j] : cand) {
        for (const auto& d : in.net) {
            if (cartan_norm(in.h1[i] * d * in.h2_inv[j]) <= in.bound) return true;
        }
    }
    return false;
}

void check_capture(const CaptureInput& in) {
    if (in.h1.size() != in.mu1.size() || in.h2_inv.size() != in.mu2.size()) {
        throw ContractViolation("capture_scan: element and projection counts differ");
    }
}

}  // namespace

std::vector<char> capture_scan_serial(const CaptureInput& in) {
    check_capture(in);
    std::vector<char> out(in.h1.size(), 0);
    for (std::size_t i = 0; i < in.h1.size(); ++i) out[i] = captured_one(in, i) ? 1 : 0;
    return out;
}

std::vector<char> capture_scan_parallel(const CaptureInput& in) {
    check_capture(in);
    std::vector<char> out(in.h1.size(), 0);
    const long n = static_cast<long>(in.h1.size());
#ifdef PROPCRIT_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = captured_one(in, static_cast<std::size_t>(i)) ? 1 : 0;
    return out;
}

}  // namespace propcrit::kernels
