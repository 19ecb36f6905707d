#include "doctest.h"
#include "oracles.hpp"

#include "propcrit/quotient.hpp"
#include "propcrit/suites.hpp"

#include <random>

using namespace propcrit;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

}  // namespace

TEST_CASE("Euclidean orbit distance") {
    const QuotientModel m = EuclideanOrth{3};
    const OrbitPoint a = orbit_of(m, vec({3.0, 4.0, 0.0}));
    const OrbitPoint b = orbit_of(m, vec({0.0, 0.0, -2.0}));
    CHECK(quotient_distance(a, b) == doctest::Approx(3.0));
    CHECK(section_dim(m) == 1);
    CHECK(theta(m, std::vector<Vector>{vec({2.0})}).size() == 2);
}

TEST_CASE("PosDef orbit distance is a permutation minimum") {
    const QuotientModel m = PosDefConj{3};
    std::mt19937_64 rng(6);
    for (int i = 0; i < 50; ++i) {
        const Matrix g1 = random_sl(3, rng), g2 = random_sl(3, rng);
        const Matrix p = g1 * g1.transpose(), q = g2 * g2.transpose();
        const OrbitPoint a = orbit_of(m, p), b = orbit_of(m, q);
        CHECK(quotient_distance(a, b) == doctest::Approx(oracle::perm_dist(a.canonical, b.canonical)));
        // d^K never exceeds the distance of representatives
        CHECK(quotient_distance(a, b) <= model_distance(m, p, q) + 1e-9);
        CHECK(model_distance(m, p, q) == doctest::Approx(oracle::spd_dist(p, q)));
        const Matrix k = random_rotation(3, rng);
        CHECK((orbit_of(m, act(m, k, p)).canonical - a.canonical).norm() < 1e-9);
    }
}

TEST_CASE("factor-two convention") {
    Matrix g = Matrix::Identity(2, 2);
    g.diagonal() << std::exp(1.5), std::exp(-1.5);
    const OrbitPoint o = mu(g, PosDefConj{2});
    CHECK(o.canonical[0] == doctest::Approx(3.0));
    CHECK(o.canonical[1] == doctest::Approx(-3.0));
    CHECK((canonical_to_cartan(cartan_to_canonical(vec({1.0, -1.0}))) - vec({1.0, -1.0})).norm() == 0.0);
    // d(g.*, *) = 2 ||mu(g)||
    const QuotientModel m = PosDefConj{2};
    CHECK(model_distance(m, base_point(m), g * g.transpose()) ==
          doctest::Approx(2.0 * cartan_projection(g).norm()));
}

TEST_CASE("section maps and Theta") {
    const QuotientModel m = PosDefConj{3};
    const Vector x = vec({-1.0, 0.5, 0.5});
    const Vector c = section_canonical(m, x);
    CHECK((c - vec({0.5, 0.5, -1.0})).norm() < 1e-12);
    CHECK((section_canonical(m, section_lift(m, c)) - c).norm() < 1e-12);
    CHECK(orbit_section_intersection(m, x).size() == 3);
    const std::vector<Vector> C{x, vec({0.5, -1.0, 0.5})};
    CHECK(theta(m, C).size() == 3);
}

TEST_CASE("non-expanding conditions hold on both models") {
    for (const QuotientModel m : {QuotientModel{EuclideanOrth{3}}, QuotientModel{PosDefConj{3}}}) {
        const NonexpandingReport r = verify_nonexpanding_conditions(m, 300, 17);
        CHECK(r.samples == 300);
        CHECK(r.max_condition1_violation <= 1e-9);
        CHECK(r.max_condition2_residual <= 1e-9);
    }
}

TEST_CASE("neighborhood lemma on a finite set") {
    const QuotientModel m = PosDefConj{3};
    const std::vector<Vector> C{vec({1.0, 0.0, -1.0}), vec({2.0, -1.0, -1.0})};
    const std::vector<Vector> Cq{vec({1.0, 0.0, -1.0})};
    const LemmaReport r = verify_lemma_neighborhoods(m, C, Cq, 0.75, 200, 23);
    CHECK(r.probes > 0);
    CHECK(r.counterexamples == 0);
}

TEST_CASE("orbit meets the section in the Weyl orbit") {
    const SectionCheck s = validate_orbit_section(PosDefConj{2}, vec({0.7, -0.7}), 1e-2, 5e-3, 1e-2, 1);
    CHECK(s.near_section > 0);
    CHECK(s.stray == 0);
    const SectionCheck t = validate_orbit_section(PosDefConj{3}, vec({1.0, 0.2, -1.2}), 1e-2, 5e-3, 1e-2, 2);
    CHECK(t.near_section > 0);
    CHECK(t.stray == 0);
}
