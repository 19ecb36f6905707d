#include "doctest.h"
#include "oracles.hpp"

#include "propcrit/cartan.hpp"
#include "propcrit/errors.hpp"
#include "propcrit/quotient.hpp"
#include "propcrit/suites.hpp"

#include <numbers>
#include <random>
#include <string>

using namespace propcrit;

TEST_CASE("Cartan projection of a unipotent element") {
    Matrix g(2, 2);
    g << 1, 1, 0, 1;
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    const Vector m = cartan_projection(g);
    CHECK(m[0] == doctest::Approx(std::log(phi)));
    CHECK(m[1] == doctest::Approx(-std::log(phi)));
    CHECK((m - oracle::mu2(g)).norm() < 1e-14);
}

TEST_CASE("Cartan projection against the eigenvalue oracle") {
    std::mt19937_64 rng(1);
    for (int n = 2; n <= 6; ++n) {
        for (int i = 0; i < 50; ++i) {
            const Matrix g = random_sl(n, rng);
            CHECK((cartan_projection(g) - oracle::mu_eig(g)).norm() < 1e-9);
        }
    }
}

TEST_CASE("KAK reconstruction with rotation factors") {
    std::mt19937_64 rng(2);
    for (int n = 2; n <= 6; ++n) {
        for (int i = 0; i < 100; ++i) {
            const Matrix g = random_sl(n, rng);
            const Kak k = kak_decompose(g);
            const Matrix rec = k.k1 * k.x.array().exp().matrix().asDiagonal() * k.k2;
            CHECK((rec - g).norm() / g.norm() < 1e-12);
            CHECK(k.k1.determinant() == doctest::Approx(1.0));
            CHECK(k.k2.determinant() == doctest::Approx(1.0));
            const Matrix I = Matrix::Identity(n, n);
            CHECK((k.k1.transpose() * k.k1 - I).norm() < 1e-12);
            CHECK((k.k2 * k.k2.transpose() - I).norm() < 1e-12);
        }
    }
}

TEST_CASE("Cartan projection laws") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 200; ++i) {
        const int n = 2 + i % 3;
        const Matrix g = random_sl(n, rng), h = random_sl(n, rng);
        const Vector m = cartan_projection(g);
        CHECK((cartan_projection(g.inverse()) - (-m).reverse()).norm() < 1e-9);
        const Matrix k1 = random_rotation(n, rng), k2 = random_rotation(n, rng);
        CHECK((cartan_projection(k1 * g * k2) - m).norm() < 1e-9);
        // ||mu(gh) - mu(g)|| <= ||mu(h)||
        CHECK((cartan_projection(g * h) - m).norm() <= cartan_projection(h).norm() + 1e-9);
    }
}

TEST_CASE("word balls count reduced words") {
    Matrix a(2, 2), b(2, 2);
    a << 3, 0, 0, 1.0 / 3;
    const Matrix r = oracle::rot2(0.7);
    b = r * a * r.transpose();
    // free group on two generators: 1 + 4 + 12 + 36 words of length <= 3
    CHECK(word_ball({a, b}, 3).size() == 53);
    CHECK(word_ball({a}, 5).size() == 11);
    CHECK_THROWS_AS(word_ball({a, b}, 6, 100), BudgetExceeded);
}

TEST_CASE("Cartan images of subgroups") {
    const AmbientGroup G(GroupKind::SL, 3);
    Matrix X = Matrix::Zero(3, 3);
    X.diagonal() << 1, 1, -2;
    const StructuredSet a = a_of_subgroup(G, OneParameter{X});
    CHECK(a.is_subspaces());
    CHECK(a.w_saturated);
    CHECK(a.component_count() == 3);
    CHECK(real_rank(OneParameter{X}) == 1);

    Matrix Y = Matrix::Zero(3, 3);
    Y.diagonal() << 1, -1, 0;
    CHECK(real_rank(ReductiveCartan{{X, Y}}) == 2);
    CHECK(real_rank(ElementList{{Matrix::Identity(3, 3)}}) == 0);
    CHECK_THROWS_AS(real_rank(Discrete{{Matrix::Identity(3, 3)}}), Unsupported);

    const StructuredSet e = a_of_subgroup(G, ElementList{{Matrix::Identity(3, 3)}});
    CHECK(e.is_cloud());
    CHECK(e.is_bounded());
    CHECK_FALSE(e.is_empirical());

    Matrix d = Matrix::Identity(3, 3);
    d.diagonal() << 2, 0.5, 1;
    const StructuredSet w = a_of_subgroup(G, Discrete{{d}}, 3);
    CHECK(w.is_empirical());
    CHECK(*w.word_budget == 3);
    CHECK(G.real_rank() == 2);
    CHECK(AmbientGroup(GroupKind::GL, 3).real_rank() == 3);
}

TEST_CASE("spec validation names the offending input") {
    const AmbientGroup G(GroupKind::SL, 2);
    Matrix singular(2, 2);
    singular << 1, 2, 2, 4;
    try {
        validate_spec(G, Discrete{{singular}});
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("singular") != std::string::npos);
    }
    Matrix ns(2, 2);
    ns << 1, 2, 0, 1;
    CHECK_THROWS_AS(validate_spec(G, OneParameter{ns}), DomainError);
    Matrix a = Matrix::Zero(2, 2), b(2, 2);
    a.diagonal() << 1, -1;
    b << 0, 1, 1, 0;
    CHECK_THROWS_AS(validate_spec(G, ReductiveCartan{{a, b}}), DomainError);
    CHECK_THROWS_AS(AmbientGroup(GroupKind::SL, 7), ContractViolation);
}

TEST_CASE("Weyl orbits") {
    Vector v(3);
    v << 1, 1, -2;
    const auto o = weyl_orbit(v);
    REQUIRE(o.size() == 3);
    CHECK(o[0][0] == 1.0);
    CHECK(o[2][0] == -2.0);
    Vector w(3);
    w << 3, 1, 2;
    CHECK(weyl_orbit(w).size() == 6);
}

TEST_CASE("compact nets cover D_rho") {
    const AmbientGroup G(GroupKind::SL, 2);
    const CompactNetD net = group_ball_net(G, 1.0, 0.2);
    CHECK(net.elements.size() > 10);
    for (const auto& g : net.elements) CHECK(cartan_projection(g).norm() <= 0.5 + 1e-12);
    // every sampled element of D_1 is within mesh of the net in Cartan distance
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int i = 0; i < 50; ++i) {
        Vector x(2);
        x << u(rng) / std::sqrt(2.0), 0.0;
        x[1] = -x[0];
        const Matrix g = random_rotation(2, rng) * x.array().exp().matrix().asDiagonal() *
                         random_rotation(2, rng);
        double best = 1e9;
        for (const auto& d : net.elements)
            best = std::min(best, cartan_projection(g.inverse() * d).norm());
        CHECK(best <= 0.2 + 1e-9);
    }
    CHECK_THROWS_AS(group_ball_net(G, 10.0, 1e-3, 1000), BudgetExceeded);
}
