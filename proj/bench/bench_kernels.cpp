// Serial reference kernels against the production (indexed / OpenMP) versions.

#include "propcrit/cartan.hpp"
#include "propcrit/kernels.hpp"
#include "propcrit/suites.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace propcrit;

namespace {

std::vector<Vector> line_cloud(const Vector& dir, int count, double step, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 0.1);
    std::vector<Vector> out;
    for (int i = 0; i < count; ++i) {
        Vector p = (i * step) * dir;
        for (Eigen::Index k = 0; k < p.size(); ++k) p[k] += nd(rng);
        out.push_back(p);
    }
    return out;
}

/// Two transverse lines in R^3: the matched set stays near the origin.
struct MatchData {
    std::vector<Vector> P1, P2;
    explicit MatchData(int n) {
        std::mt19937_64 rng(7);
        P1 = line_cloud(Vector::Unit(3, 0), n, 0.5, rng);
        P2 = line_cloud(Vector::Unit(3, 1), n, 0.5, rng);
    }
};

void BM_match_serial(benchmark::State& st) {
    const MatchData d(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::max_matched_norm_serial(d.P1, d.P2, 1.0));
}

void BM_match_parallel(benchmark::State& st) {
    const MatchData d(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::max_matched_norm_parallel(d.P1, d.P2, 1.0));
}

std::vector<Matrix> elements(int count, int n) {
    std::mt19937_64 rng(11);
    std::vector<Matrix> gs;
    for (int i = 0; i < count; ++i) gs.push_back(random_sl(n, rng));
    return gs;
}

void BM_cartan_serial(benchmark::State& st) {
    const auto gs = elements(static_cast<int>(st.range(0)), 4);
    for (auto _ : st) benchmark::DoNotOptimize(kernels::cartan_projection_batch_serial(gs));
}

void BM_cartan_parallel(benchmark::State& st) {
    const auto gs = elements(static_cast<int>(st.range(0)), 4);
    for (auto _ : st) benchmark::DoNotOptimize(kernels::cartan_projection_batch_parallel(gs));
}

struct CaptureData {
    std::vector<Matrix> h1, h2inv, net;
    std::vector<Vector> mu1, mu2;
    explicit CaptureData(int L) {
        const AmbientGroup sl2(GroupKind::SL, 2);
        Matrix X(2, 2);
        X << 1.0, 0.0, 0.0, -1.0;
        for (int k = -L; k <= L; ++k) {
            Matrix h = Matrix::Zero(2, 2);
            h(0, 0) = std::exp(k);
            h(1, 1) = std::exp(-k);
            h1.push_back(h);
            h2inv.push_back(h.inverse());
        }
        net = group_ball_net(sl2, 1.0, 0.2).elements;
        mu1 = kernels::cartan_projection_batch_serial(h1);
        for (const auto& h : h2inv) mu2.push_back(cartan_projection(h.inverse()));
    }
    kernels::CaptureInput input() const { return {h1, mu1, h2inv, mu2, net, 0.7, 1.4 + 1e-9}; }
};

void BM_capture_serial(benchmark::State& st) {
    const CaptureData d(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::capture_scan_serial(d.input()));
}

void BM_capture_parallel(benchmark::State& st) {
    const CaptureData d(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::capture_scan_parallel(d.input()));
}

}  // namespace

BENCHMARK(BM_match_serial)->Arg(1000)->Arg(4000);
BENCHMARK(BM_match_parallel)->Arg(1000)->Arg(4000);
BENCHMARK(BM_cartan_serial)->Arg(1000)->Arg(10000);
BENCHMARK(BM_cartan_parallel)->Arg(1000)->Arg(10000);
BENCHMARK(BM_capture_serial)->Arg(4)->Arg(16);
BENCHMARK(BM_capture_parallel)->Arg(4)->Arg(16);

BENCHMARK_MAIN();
