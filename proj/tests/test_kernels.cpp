#include "doctest.h"
#include "oracles.hpp"

#include "propcrit/cartan.hpp"
#include "propcrit/kernels.hpp"
#include "propcrit/suites.hpp"

#include <random>

using namespace propcrit;

namespace {

std::vector<Vector> random_points(std::size_t n, int d, double scale, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<Vector> out;
    for (std::size_t i = 0; i < n; ++i) {
        Vector v(d);
        for (int k = 0; k < d; ++k) v[k] = u(rng);
        out.push_back(v);
    }
    return out;
}

}  // namespace

TEST_CASE("matched norm: serial, parallel and oracle agree") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 2 + trial % 3;
        const auto Q = random_points(300, d, 10.0, rng);
        const auto T = random_points(200, d, 10.0, rng);
        const double r = 0.5 + 0.25 * trial;
        const auto s = kernels::max_matched_norm_serial(Q, T, r);
        const auto p = kernels::max_matched_norm_parallel(Q, T, r);
        CHECK(s.index == p.index);
        CHECK(s.max_norm == p.max_norm);
        const double o = oracle::matched_max(Q, T, r);
        if (o < 0) {
            CHECK(s.index == -1);
        } else {
            CHECK(s.max_norm == doctest::Approx(o));
        }
    }
}

TEST_CASE("matched norm ties resolve to the smallest index") {
    std::vector<Vector> Q, T;
    for (int i = 0; i < 8; ++i) {
        Vector v(2);
        v << std::cos(i * 0.7) * 3.0, std::sin(i * 0.7) * 3.0;
        Q.push_back(v);
        T.push_back(v);
    }
    const auto s = kernels::max_matched_norm_serial(Q, T, 1e-9);
    const auto p = kernels::max_matched_norm_parallel(Q, T, 1e-9);
    CHECK(s.index == 0);
    CHECK(p.index == 0);
    const std::vector<Vector> none;
    CHECK(kernels::max_matched_norm_parallel(Q, none, 1.0).index == -1);
}

TEST_CASE("batched Cartan projection matches the single call") {
    std::mt19937_64 rng(3);
    std::vector<Matrix> gs;
    for (int i = 0; i < 200; ++i) gs.push_back(random_sl(2 + i % 4, rng));
    const auto s = kernels::cartan_projection_batch_serial(gs);
    const auto p = kernels::cartan_projection_batch_parallel(gs);
    REQUIRE(s.size() == gs.size());
    for (std::size_t i = 0; i < gs.size(); ++i) {
        CHECK(s[i] == p[i]);
        CHECK((s[i] - cartan_projection(gs[i])).norm() < 1e-12);
    }
}

TEST_CASE("capture scan: serial equals parallel") {
    std::mt19937_64 rng(9);
    const AmbientGroup G(GroupKind::SL, 2);
    std::vector<Matrix> h1, h2inv;
    for (int i = 0; i < 60; ++i) h1.push_back(random_sl(2, rng));
    for (int i = 0; i < 40; ++i) h2inv.push_back(random_sl(2, rng).inverse());
    std::vector<Vector> mu1, mu2;
    for (const auto& h : h1) mu1.push_back(cartan_projection(h));
    for (const auto& h : h2inv) mu2.push_back(cartan_projection(h.inverse()));
    const CompactNetD net = group_ball_net(G, 1.0, 0.3);
    kernels::CaptureInput in{h1, mu1, h2inv, mu2, net.elements, 1.0, 2.0};
    const auto s = kernels::capture_scan_serial(in);
    const auto p = kernels::capture_scan_parallel(in);
    CHECK(s == p);
}
