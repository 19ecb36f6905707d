#include "doctest.h"
#include "oracles.hpp"

#include "propcrit/errors.hpp"
#include "propcrit/properness.hpp"
#include "propcrit/quotient.hpp"
#include "propcrit/suites.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace propcrit;

namespace {

Matrix diag(std::initializer_list<double> v) {
    Vector d(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) d[i++] = x;
    return d.asDiagonal();
}

PropernessProblem problem(int n, SubgroupSpec h1, SubgroupSpec h2) {
    PropernessProblem p;
    p.ambient = AmbientGroup(GroupKind::SL, n);
    p.h1 = std::move(h1);
    p.h2 = std::move(h2);
    return p;
}

Matrix schottky_b() {
    const Matrix r = oracle::rot2(std::numbers::pi / 4.0);
    return r * diag({3.0, 1.0 / 3.0}) * r.transpose();
}

}  // namespace

TEST_CASE("SL(3) one-parameter pair is proper") {
    const auto p = problem(3, OneParameter{diag({1, 1, -2})}, OneParameter{diag({1, -1, 0})});
    const Verdict v = decide(p);
    REQUIRE(std::holds_alternative<ProperVerdict>(v));
    CHECK(std::get<ProperVerdict>(v).certificate.gap > 0.5);
    CHECK(verdict_properness(v) == Decision::yes);
    CHECK(std::string(verdict_kind(v)) == "Proper");
}

TEST_CASE("identical subgroups are not proper") {
    const auto p = problem(2, OneParameter{diag({1, -1})}, OneParameter{diag({1, -1})});
    const Verdict v = decide(p);
    REQUIRE(std::holds_alternative<NotProperVerdict>(v));
    const Vector w = std::get<NotProperVerdict>(v).witness;
    CHECK(std::abs(std::abs(w[0]) - 1.0 / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("compact factor makes any pair proper") {
    const auto p = problem(2, OneParameter{diag({1, -1})}, ElementList{{Matrix::Identity(2, 2)}});
    const Verdict v = decide(p);
    REQUIRE(std::holds_alternative<ProperVerdict>(v));
    CHECK(std::isinf(std::get<ProperVerdict>(v).certificate.gap));
    REQUIRE(std::get<ProperVerdict>(v).bounded_norm);
    CHECK(*std::get<ProperVerdict>(v).bounded_norm == 0.0);
}

TEST_CASE("decisions are symmetric and invariant under rotation and scaling") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 3 + trial % 2;
        auto traceless = [&] {
            Vector d(n);
            for (int i = 0; i < n; ++i) d[i] = std::round(nd(rng) * 2.0);
            d.array() -= d.mean();
            if (d.norm() < 1e-9) d[0] = 1.0, d[1] = -1.0;
            return Matrix(d.asDiagonal());
        };
        const Matrix X = traceless(), Y = (trial % 5 == 0) ? X : traceless();
        const auto p = problem(n, OneParameter{X}, OneParameter{Y});
        const Decision a = verdict_properness(decide(p));
        CHECK(a == verdict_properness(decide(problem(n, OneParameter{Y}, OneParameter{X}))));
        const Matrix k = random_rotation(n, rng);
        CHECK(a == verdict_properness(
                       decide(problem(n, OneParameter{k * X * k.transpose()}, OneParameter{2.5 * Y}))));
        if (trial % 5 == 0) CHECK(a == Decision::no);
    }
}

TEST_CASE("discrete specs need sampled mode") {
    auto p = problem(2, Discrete{{diag({2.0, 0.5})}}, OneParameter{diag({1, -1})});
    CHECK(effective_mode(p) == Mode::sampled);
    p.mode = Mode::exact;
    CHECK_THROWS_AS(decide(p), ModeError);
    CHECK_THROWS_AS(decide_equivalence(p), ModeError);
    p.h2 = ElementList{{Matrix::Identity(2, 2)}};
    CHECK(std::holds_alternative<ProperVerdict>(decide(p)));
    CHECK(parse_mode("auto") == Mode::automatic);
    CHECK_THROWS(parse_mode("fast"));
}

TEST_CASE("sampled mode on Schottky and diagonal subgroups") {
    auto p = problem(2, Discrete{{diag({3.0, 1.0 / 3.0}), schottky_b()}}, Discrete{{diag({3.0, 1.0 / 3.0}), schottky_b()}});
    p.budgets.word_length = 4;
    CHECK(verdict_properness(decide(p)) == Decision::no);
    p.h2 = ElementList{{Matrix::Identity(2, 2), -Matrix::Identity(2, 2)}};
    CHECK(verdict_properness(decide(p)) == Decision::yes);
    auto q = problem(3, OneParameter{diag({1, 1, -2})}, OneParameter{diag({1, -1, 0})});
    q.mode = Mode::sampled;
    CHECK(std::holds_alternative<EmpiricalProperVerdict>(decide(q)));
}

TEST_CASE("budget validation") {
    Budgets b;
    b.headroom = 0.0;
    CHECK_THROWS_AS(b.validate(), ContractViolation);
    b.headroom = 1.0;
    CHECK_NOTHROW(b.validate());
}

TEST_CASE("equivalence") {
    const auto a = OneParameter{diag({1, 1, -2})};
    CHECK(decide_equivalence(problem(3, a, OneParameter{diag({-3, -3, 6})})).sim == Decision::yes);
    CHECK(decide_equivalence(problem(3, a, OneParameter{diag({1, -1, 0})})).sim == Decision::no);
    const auto cartan = ReductiveCartan{{diag({1, -1, 0}), diag({0, 1, -1})}};
    CHECK(decide_equivalence(problem(3, cartan, OneParameter{diag({1, -1, 0})})).sim == Decision::no);
    CHECK(decide_equivalence(problem(3, ElementList{{Matrix::Identity(3, 3)}},
                                     ElementList{{Matrix::Identity(3, 3)}}))
              .sim == Decision::yes);
}

TEST_CASE("Calabi-Markus phenomenon") {
    const AmbientGroup sl2(GroupKind::SL, 2), sl3(GroupKind::SL, 3);
    const auto r = calabi_markus(sl2, OneParameter{diag({1, -1})});
    CHECK_FALSE(r.admits_infinite_discontinuous);
    CHECK(r.ambient_rank == 1);
    CHECK(r.subgroup_rank == 1);
    CHECK(r.statement.find("Calabi-Markus") != std::string::npos);
    const auto s = calabi_markus(sl3, OneParameter{diag({1, 1, -2})});
    CHECK(s.admits_infinite_discontinuous);
    CHECK_THROWS_AS(calabi_markus(sl2, Discrete{{diag({2.0, 0.5})}}), Unsupported);
}

TEST_CASE("brute force agrees with the exact decision") {
    const AmbientGroup sl2(GroupKind::SL, 2);
    const CompactNetD net = group_ball_net(sl2, 1.0, 0.2);
    auto p = problem(2, OneParameter{diag({1, -1})}, OneParameter{diag({1, -1})});
    p.budgets.word_length = 6;
    const BruteForceReport same = brute_force_properness(p, net);
    CHECK(same.bounded_away == Decision::no);
    CHECK(same.captured == same.h1_count);

    p.h2 = ElementList{{Matrix::Identity(2, 2)}};
    const BruteForceReport trivial = brute_force_properness(p, net);
    CHECK(trivial.bounded_away == Decision::yes);
    CHECK(trivial.max_captured_norm <= 0.5 + 0.2 + 1e-9);

    // conjugating by a rotation leaves the Cartan image unchanged
    const Matrix r = oracle::rot2(std::numbers::pi / 4.0);
    p.h2 = OneParameter{r * diag({1, -1}) * r.transpose()};
    CHECK(brute_force_properness(p, net).bounded_away == Decision::no);
    CHECK(verdict_properness(decide(p)) == Decision::no);
}

TEST_CASE("cross-validation of the SL(2) goldens") {
    for (const auto& [name, p] : sl2_goldens()) {
        const CrossValidation cv = cross_validate(p);
        INFO(name << ": " << cv.detail);
        CHECK(cv.consistent);
    }
}

TEST_CASE("bounded intersections control every thickened intersection") {
    // HBI certificate: points of a(H1) within r of a(H2) lie within r / sin(gap)
    const auto p = problem(3, OneParameter{diag({1, 1, -2})}, OneParameter{diag({1, -1, 0})});
    const auto v = std::get<ProperVerdict>(decide(p));
    for (int j = -8; j <= 8; ++j) {
        const Matrix g = (j * 0.5 * diag({1, 1, -2})).diagonal().array().exp().matrix().asDiagonal();
        const Vector a = cartan_projection(g);
        const double r = dist_to_set(a, a_of_subgroup(p.ambient, p.h2));
        CHECK(a.norm() <= v.certificate.intersection_radius(r) * (1.0 + 1e-12) + 1e-12);
    }
}

TEST_CASE("theorem suite passes at small size") {
    TheoremSuiteConfig cfg;
    cfg.n = 3;
    cfg.configs = 20;
    cfg.samples = 100;
    cfg.seed = 4;
    const SuiteReport r = theorem_suite(cfg);
    for (const auto& c : r.checks) {
        INFO(c.name << " worst " << c.worst << " threshold " << c.threshold << " " << c.detail);
        CHECK(c.pass);
    }
}
