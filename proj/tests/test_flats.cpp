#include "doctest.h"
#include "oracles.hpp"

#include "propcrit/errors.hpp"
#include "propcrit/flats.hpp"

#include <numbers>
#include <random>

using namespace propcrit;

namespace {

Matrix col(std::initializer_list<double> v) {
    Matrix m(static_cast<Eigen::Index>(v.size()), 1);
    Eigen::Index i = 0;
    for (double x : v) m(i++, 0) = x;
    return m;
}

Vector vec(std::initializer_list<double> v) { return col(v).col(0); }

StructuredSet lines(int d, std::vector<Matrix> spans) { return StructuredSet::subspaces(d, spans); }

Vector random_unit(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Vector v(d);
    for (int i = 0; i < d; ++i) v[i] = nd(rng);
    return v.normalized();
}

}  // namespace

TEST_CASE("cone double description of the quadrant and a half-plane") {
    const Cone q = Cone::from_inequalities(Matrix::Identity(2, 2));
    CHECK(q.rays.cols() == 2);
    CHECK(q.lineality.cols() == 0);
    CHECK(q.contains(vec({1.0, 0.5}), 1e-12));
    CHECK_FALSE(q.contains(vec({-1.0, 0.5}), 1e-12));
    CHECK(cone_distance(q, vec({-1.0, -1.0})) == doctest::Approx(std::sqrt(2.0)));
    CHECK(cone_distance(q, vec({-3.0, 2.0})) == doctest::Approx(3.0));

    Matrix half(1, 2);
    half << 0.0, 1.0;  // y >= 0
    const Cone h = Cone::from_inequalities(half);
    CHECK(h.lineality.cols() == 1);
    CHECK(h.rays.cols() == 1);
    CHECK(q.subset_of(h, 1e-12));
    CHECK_FALSE(h.subset_of(q, 1e-12));
    CHECK(cone_distance(h, vec({5.0, -2.0})) == doctest::Approx(2.0));
    CHECK_THROWS_AS(Cone::from_inequalities(Matrix::Identity(7, 7)), Unsupported);
}

TEST_CASE("permutation flat space and group validation") {
    const FlatSpace s3 = FlatSpace::permutations(3, true);
    CHECK(s3.group().size() == 6);
    CHECK(s3.contains(vec({1.0, -1.0, 0.0}), 1e-12));
    CHECK_FALSE(s3.contains(vec({1.0, 1.0, 0.0}), 1e-12));
    CHECK(FlatSpace::permutations(4, false).group().size() == 24);

    Matrix swap(2, 2);
    swap << 0, 1, 1, 0;
    CHECK_NOTHROW(FlatSpace(2, std::nullopt, {Matrix::Identity(2, 2), swap}));
    Matrix rot = oracle::rot2(0.3);
    CHECK_THROWS_AS(FlatSpace(2, std::nullopt, {Matrix::Identity(2, 2), rot}), ContractViolation);
    CHECK_THROWS_AS(FlatSpace(2, std::nullopt, {swap}), ContractViolation);
}

TEST_CASE("hbi_decide on coordinate axes") {
    const auto e1 = lines(2, {col({1.0, 0.0})});
    const auto e2 = lines(2, {col({0.0, 1.0})});
    const HbiCertificate c = hbi_decide(e1, e2);
    CHECK(c.verdict);
    CHECK(c.gap == doctest::Approx(std::numbers::pi / 2.0));
    CHECK(c.intersection_radius(3.0) == doctest::Approx(3.0));

    const HbiCertificate d = hbi_decide(e1, e1);
    CHECK_FALSE(d.verdict);
    REQUIRE(d.witness.has_value());
    CHECK((*d.witness - vec({1.0, 0.0})).norm() < 1e-12);
}

TEST_CASE("Weyl orbits of (1,1,-2) and (1,-1,0) have bounded intersections") {
    const FlatSpace s3 = FlatSpace::permutations(3, true);
    const auto A = symmetrize(lines(3, {col({1.0, 1.0, -2.0})}), s3);
    const auto B = symmetrize(lines(3, {col({1.0, -1.0, 0.0})}), s3);
    CHECK(A.component_count() == 3);
    CHECK(B.component_count() == 3);
    CHECK(A.w_saturated);
    // oracle: compare all orbit lines pairwise
    double gap = std::numbers::pi;
    bool equal_pair = false;
    for (const auto& u : oracle::permutations(vec({1.0, 1.0, -2.0}))) {
        for (const auto& v : oracle::permutations(vec({1.0, -1.0, 0.0}))) {
            const double a = oracle::line_angle(u, v);
            gap = std::min(gap, a);
            equal_pair = equal_pair || a < 1e-12;
        }
    }
    const HbiCertificate c = hbi_decide(A, B);
    CHECK(c.verdict == !equal_pair);
    CHECK(c.gap == doctest::Approx(gap).epsilon(1e-12));
    CHECK(hbi_decide(A, A).verdict == false);
}

TEST_CASE("hbi_decide is symmetric and its certificate bound holds") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 3 + trial % 2;
        std::vector<Matrix> s1{Matrix(d, 1)}, s2{Matrix(d, trial % 3 == 0 ? 2 : 1)};
        s1[0].col(0) = random_unit(d, rng);
        for (Eigen::Index j = 0; j < s2[0].cols(); ++j) s2[0].col(j) = random_unit(d, rng);
        const auto C1 = lines(d, s1), C2 = lines(d, s2);
        const HbiCertificate a = hbi_decide(C1, C2), b = hbi_decide(C2, C1);
        CHECK(a.verdict == b.verdict);
        CHECK(a.gap == b.gap);
        if (!a.verdict) continue;
        // points of C1 within r of C2 satisfy ||x|| <= r / sin(gap)
        for (double t : {0.5, 1.0, 5.0, 50.0}) {
            const Vector x = t * s1[0].col(0);
            const double r = oracle::dist_to_span(x, s2[0]);
            CHECK(x.norm() <= a.intersection_radius(r) * (1.0 + 1e-10));
        }
    }
}

TEST_CASE("hbi_decide on cones") {
    const auto Q1 = StructuredSet::cones(2, {Matrix::Identity(2, 2)});
    const auto Q3 = StructuredSet::cones(2, {-Matrix::Identity(2, 2)});
    Matrix q4(2, 2);
    q4 << 1, 0, 0, -1;
    const auto Q4 = StructuredSet::cones(2, {q4});
    const HbiCertificate a = hbi_decide(Q1, Q3);
    CHECK(a.verdict);
    CHECK_FALSE(a.gap_exact);
    CHECK(a.gap > 0.0);
    CHECK(a.gap <= std::numbers::pi / 2.0 + 1e-12);
    const HbiCertificate b = hbi_decide(Q1, Q4);
    CHECK_FALSE(b.verdict);
    REQUIRE(b.witness);
    CHECK((*b.witness - vec({1.0, 0.0})).norm() < 1e-9);
    // a point cloud is refused
    CHECK_THROWS_AS(hbi_decide(Q1, StructuredSet::cloud(2, {vec({1.0, 1.0})})), DomainError);
}

TEST_CASE("hbi_check_sampled matches a brute-force scan") {
    std::vector<Vector> X, Y;
    for (double t = -10.0; t <= 10.0; t += 0.25) {
        X.push_back(vec({t, 0.0}));
        Y.push_back(vec({0.0, t}));
    }
    const SampledHbi s = hbi_check_sampled(X, Y, 1.0, 10.0);
    CHECK(s.empirically_hbi);
    CHECK(s.max_norm == doctest::Approx(oracle::matched_max(X, Y, 1.0)));
    CHECK(s.max_norm == doctest::Approx(1.0));

    const SampledHbi same = hbi_check_sampled(X, X, 1.0, 10.0);
    CHECK_FALSE(same.empirically_hbi);
    REQUIRE(same.offending);
    CHECK(same.max_norm == doctest::Approx(10.0));

    std::vector<Vector> shifted;
    const Vector v = vec({0.3, 0.4});
    for (const auto& p : X) shifted.push_back(p + v);
    CHECK_FALSE(hbi_check_sampled(X, shifted, v.norm(), 10.0).empirically_hbi);
}

TEST_CASE("sim_decide by containment") {
    const auto x = lines(2, {col({1.0, 0.0})});
    const auto diag = lines(2, {col({1.0, 1.0})});
    const auto plane = lines(3, {Matrix::Identity(3, 2)});
    const auto axis = lines(3, {col({1.0, 0.0, 0.0})});
    CHECK(sim_decide(x, x).value == Decision::yes);
    const SimResult r = sim_decide(x, diag);
    CHECK(r.value == Decision::no);
    CHECK(sim_decide(plane, axis).value == Decision::no);
    CHECK(sim_decide(plane, axis).uncovered_side == 1);
    CHECK(sim_decide(axis, plane).uncovered_side == 2);
    const auto both = lines(3, {Matrix::Identity(3, 2), col({1.0, 0.0, 0.0})});
    CHECK(sim_decide(both, plane).value == Decision::yes);
}

TEST_CASE("separating_witness sequences") {
    const auto e1 = lines(2, {col({1.0, 0.0})});
    const auto e2 = lines(2, {col({0.0, 1.0})});
    const auto pts = separating_witness(e1, e2, 5);
    REQUIRE(pts.size() == 6);
    for (std::size_t n = 0; n < pts.size(); ++n) {
        CHECK(std::abs(pts[n][1]) < 1e-12);
        CHECK(std::abs(pts[n][0]) > static_cast<double>(n));
    }
    CHECK_THROWS_AS(separating_witness(e1, e1, 5), WitnessNotFound);

    const auto diag = lines(2, {col({1.0, 1.0})});
    const auto far = separating_witness(e1, diag, 10);
    for (std::size_t n = 0; n < far.size(); ++n) {
        // distance of (x, 0) to the line y = x is |x| / sqrt 2
        CHECK(std::abs(far[n][0]) / std::sqrt(2.0) > static_cast<double>(n));
    }
}

TEST_CASE("neighborhoods are closed") {
    const auto x = lines(2, {col({1.0, 0.0})});
    CHECK(neighborhood_member(vec({5.0, 1.0}), x, 1.0));
    CHECK_FALSE(neighborhood_member(vec({5.0, 1.001}), x, 1.0));
    CHECK(dist_to_set(vec({5.0, -2.0}), x) == doctest::Approx(2.0));
}

TEST_CASE("sample_set stays on the set and inside the ball") {
    const auto plane = lines(3, {Matrix::Identity(3, 2)});
    SamplingPlan plan;
    plan.radius = 20.0;
    plan.radial_step = 1.0;
    plan.directions = 32;
    const auto pts = sample_set(plane, plan);
    CHECK(pts.size() > 32);
    for (const auto& p : pts) {
        CHECK(std::abs(p[2]) < 1e-12);
        CHECK(p.norm() <= 20.0 + 1e-9);
    }
    plan.max_points = 10;
    CHECK_THROWS_AS(sample_set(plane, plan), BudgetExceeded);
}
