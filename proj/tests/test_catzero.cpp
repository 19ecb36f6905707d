#include "doctest.h"
#include "oracles.hpp"

#include "propcrit/catzero.hpp"
#include "propcrit/errors.hpp"

#include <random>

using namespace propcrit;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

Vector flat(const Matrix& m) {
    Vector out(m.size());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out[i * m.cols() + j] = m(i, j);
    return out;
}

}  // namespace

TEST_CASE("hyperbolic distances and geodesics") {
    const Cat0Model h = Cat0Model::hyperbolic();
    CHECK(dist(h, vec({0.0, 1.0}), vec({0.0, std::exp(1.0)})) == doctest::Approx(1.0));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) {
        const Vector p = random_point(h, rng), q = random_point(h, rng);
        CHECK(dist(h, p, q) == doctest::Approx(oracle::hyp_dist(p[0], p[1], q[0], q[1])));
        const Vector m = geodesic(h, p, q, 0.3);
        CHECK(dist(h, p, m) == doctest::Approx(0.3 * dist(h, p, q)).epsilon(1e-9));
        CHECK(geodesic(h, p, q, 1.0) == q);
    }
    CHECK_THROWS_AS(validate_point(h, vec({0.0, -1.0})), DomainError);
}

TEST_CASE("PosDef geodesic midpoint") {
    const Cat0Model m = Cat0Model::posdef(2);
    Matrix q = Matrix::Identity(2, 2);
    q.diagonal() << std::exp(2.0), std::exp(-2.0);
    const Vector I = flat(Matrix::Identity(2, 2));
    CHECK(dist(m, I, flat(q)) == doctest::Approx(std::sqrt(8.0)));
    Matrix mid = Matrix::Identity(2, 2);
    mid.diagonal() << std::exp(1.0), std::exp(-1.0);
    CHECK((geodesic(m, I, flat(q), 0.5) - flat(mid)).norm() < 1e-12);
}

TEST_CASE("comparison inequality") {
    std::mt19937_64 rng(2);
    for (const auto& m : {Cat0Model::euclidean(3), Cat0Model::hyperbolic(), Cat0Model::posdef(3),
                          Cat0Model::product({Cat0Model::euclidean(2), Cat0Model::hyperbolic()})}) {
        for (int i = 0; i < 200; ++i) {
            const Vector a = random_point(m, rng), b = random_point(m, rng), c = random_point(m, rng);
            CHECK(comparison_check(m, a, b, c, 0.0) == 0.0);
            CHECK(comparison_check(m, a, b, c, 0.4) >= -1e-9);
        }
    }
    const Cat0Model e = Cat0Model::euclidean(2);
    CHECK(comparison_check(e, vec({0.0, 0.0}), vec({1.0, 1.0}), vec({2.0, -1.0}), 0.5) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("asymptotic rays stay within the base distance") {
    std::mt19937_64 rng(3);
    for (const auto& m : {Cat0Model::euclidean(2), Cat0Model::hyperbolic(),
                          Cat0Model::product({Cat0Model::euclidean(1), Cat0Model::hyperbolic()})}) {
        for (int i = 0; i < 50; ++i) {
            const Vector p = random_point(m, rng), q = random_point(m, rng), p2 = random_point(m, rng);
            const GeodesicRay c = ray_through(m, p, q);
            const GeodesicRay c2 = asymptotic_ray(m, c, p2);
            const double d0 = dist(m, p, p2);
            for (double t : {0.0, 1.0, 10.0, 50.0})
                CHECK(ray_separation(m, c, c2, t) <= d0 + 1e-7);
        }
    }
    CHECK_THROWS_AS(asymptotic_ray(Cat0Model::posdef(2), ray_through(Cat0Model::posdef(2),
                                                                     flat(Matrix::Identity(2, 2)),
                                                                     flat(Matrix::Identity(2, 2))),
                                   flat(Matrix::Identity(2, 2))),
                    Unsupported);
}

TEST_CASE("ray distance matches a fine grid") {
    const Cat0Model h = Cat0Model::hyperbolic();
    const GeodesicRay c = ray_through(h, vec({0.0, 1.0}), vec({1.0, 1.0}));
    const Vector q = vec({2.0, 0.5});
    const RayDistance rd = ray_distance(h, q, c, 20.0);
    double best = 1e9;
    for (int i = 0; i <= 200000; ++i) best = std::min(best, dist(h, q, ray_point(h, c, 20.0 * i / 200000.0)));
    CHECK(rd.d == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("property S witness on the hyperbolic plane") {
    const Cat0Model h = Cat0Model::hyperbolic();
    const Vector p = vec({0.0, 1.0}), p0 = vec({0.0, 2.0}), q = vec({0.0, 4.0});
    const PropertySWitness w = property_s_witness(h, p0, p, q);
    CHECK((apply_isometry(h, w.g, p) - p0).norm() < 1e-12);
    CHECK((apply_isometry(h, w.g, q) - vec({0.0, 8.0})).norm() < 1e-9);
    CHECK(dist(h, q, apply_isometry(h, w.g, q)) == doctest::Approx(std::log(2.0)));
    CHECK(w.bound <= w.r + 2.0 * w.b + 1e-12);
    CHECK(w.g.mobius().determinant() == doctest::Approx(1.0));

    std::mt19937_64 rng(4);
    for (const auto& m : {Cat0Model::euclidean(3), h,
                          Cat0Model::product({Cat0Model::euclidean(2), Cat0Model::hyperbolic()})}) {
        for (int i = 0; i < 100; ++i) {
            const Vector a = random_point(m, rng), b = random_point(m, rng), c = random_point(m, rng);
            const PropertySWitness s = property_s_witness(m, a, b, c);
            CHECK(dist(m, apply_isometry(m, s.g, b), a) < 1e-8);
            CHECK(dist(m, c, apply_isometry(m, s.g, c)) <= s.bound + 1e-8);
            CHECK(s.bound <= s.r + 2.0 * s.b + 1e-8);
        }
    }
}
