#pragma once

// CAT(0) model spaces with flat point coordinates:
//   Euclidean(n)      x in R^n
//   HyperbolicPlane   (x, y), y > 0, upper half-plane of curvature -1
//   PosDef(n)         det-1 SPD matrix, row-major n*n entries
//   Product           concatenated factor coordinates, root-sum-square metric

#include "propcrit/numerics.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace propcrit {

struct Cat0Model;

struct EuclideanSpace {
    int n = 2;
};
struct HyperbolicPlane {};
struct PosDefSpace {
    int n = 2;
};
struct ProductSpace {
    std::vector<Cat0Model> factors;
};

struct Cat0Model {
    std::variant<EuclideanSpace, HyperbolicPlane, PosDefSpace, ProductSpace> kind;

    static Cat0Model euclidean(int n) { return {EuclideanSpace{n}}; }
    static Cat0Model hyperbolic() { return {HyperbolicPlane{}}; }
    static Cat0Model posdef(int n) { return {PosDefSpace{n}}; }
    static Cat0Model product(std::vector<Cat0Model> factors) { return {ProductSpace{std::move(factors)}}; }
};

std::string model_name(const Cat0Model& m);
int point_dim(const Cat0Model& m);
/// Throws DomainError for coordinates outside the model.
void validate_point(const Cat0Model& m, const Vector& p);

double dist(const Cat0Model& m, const Vector& p, const Vector& q);
/// Constant-speed geodesic with geodesic(p, q, 0) = p and geodesic(p, q, 1) = q exactly.
Vector geodesic(const Cat0Model& m, const Vector& p, const Vector& q, double t);

/// d_R2(x1', p') - d(x1, p) for p = geodesic(x2, x3, s) and its comparison
/// point. Degenerate triangles and s in {0, 1} give 0; inputs breaking the
/// triangle inequality throw MetricDefect.
double comparison_check(const Cat0Model& m, const Vector& x1, const Vector& x2, const Vector& x3, double s);

/// Unit-speed geodesic ray.
struct GeodesicRay {
    Vector base;
    Vector direction;                // Euclidean unit vector; PosDef unit-Frobenius symmetric (row-major)
    std::optional<double> endpoint;  // hyperbolic boundary point on R; nullopt means infinity
    std::vector<GeodesicRay> parts;  // product factors
    std::vector<double> speeds;      // product factor speeds, root-sum-square 1
};

Vector ray_point(const Cat0Model& m, const GeodesicRay& c, double t);
/// Ray from p through q (q != p); for q == p an arbitrary fixed ray from p.
GeodesicRay ray_through(const Cat0Model& m, const Vector& p, const Vector& q);
/// The ray from p2 asymptotic to c. PosDef (and products containing it) are unsupported.
GeodesicRay asymptotic_ray(const Cat0Model& m, const GeodesicRay& c, const Vector& p2);
/// d(c1(t), c2(t)); evaluated in a chart sending the common endpoint to infinity when
/// both are hyperbolic rays to the same boundary point.
double ray_separation(const Cat0Model& m, const GeodesicRay& c1, const GeodesicRay& c2, double t);

struct RayDistance {
    double d = 0.0;
    double t_star = 0.0;
    bool horizon_limited = false;
};

/// min over t in [0, t_max] of d(q, c(t)) by golden-section search; t_max <= 0
/// selects the default horizon d(c(0), q) + 10.
RayDistance ray_distance(const Cat0Model& m, const Vector& q, const GeodesicRay& c, double t_max = 0.0);

/// Translation (Euclidean), T^{-1} o (z -> a z + beta) o T with T(z) = -1/(z - xi)
/// (hyperbolic; T is the identity when xi is infinity), or per-factor parts.
struct Isometry {
    Vector translation;
    std::optional<double> fixed_endpoint;
    double scale = 1.0;
    double shift = 0.0;
    std::vector<Isometry> parts;

    /// The hyperbolic isometry as a 2x2 matrix of determinant 1.
    Matrix mobius() const;
};

Vector apply_isometry(const Cat0Model& m, const Isometry& g, const Vector& p);

struct PropertySWitness {
    Isometry g;
    double r = 0.0;      // d(p, p0)
    double b = 0.0;      // distance from q to the ray used
    double bound = 0.0;  // guaranteed bound on d(q, g q), at most r + 2b
};

/// Isometry g with g p = p0 moving q by at most bound. Euclidean, hyperbolic and
/// products of these.
PropertySWitness property_s_witness(const Cat0Model& m, const Vector& p0, const Vector& p, const Vector& q);

/// Random point for sweeps; `scale` bounds the spread of the coordinates.
Vector random_point(const Cat0Model& m, std::mt19937_64& rng, double scale = 2.0);

}  // namespace propcrit
