#include "propcrit/catzero.hpp"

#include "propcrit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace propcrit {
namespace {

using cplx = std::complex<double>;
const cplx I(0.0, 1.0);

cplx as_complex(const Vector& p) { return {p[0], p[1]}; }
Vector from_complex(cplx z) {
    Vector v(2);
    v << z.real(), z.imag();
    return v;
}

double hyp_dist(cplx z, cplx w) {
    return 2.0 * std::asinh(std::abs(z - w) / (2.0 * std::sqrt(z.imag() * w.imag())));
}

// T(z) = -1/(z - xi) sends xi to infinity; identity for xi = infinity.
cplx chart(const std::optional<double>& xi, cplx z) { return xi ? -1.0 / (z - *xi) : z; }
cplx unchart(const std::optional<double>& xi, cplx w) { return xi ? *xi - 1.0 / w : w; }

Matrix unflatten(const Vector& p, int n) {
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(p.data(), n, n);
}

Vector flatten(const Matrix& M) {
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> R = M;
    return Eigen::Map<const Vector>(R.data(), R.size());
}

Matrix symmetrized(const Matrix& M) { return 0.5 * (M + M.transpose()); }

// Splits product coordinates into factor coordinates.
std::vector<Vector> split(const ProductSpace& ps, const Vector& p) {
    std::vector<Vector> out;
    Eigen::Index off = 0;
    for (const auto& f : ps.factors) {
        const int d = point_dim(f);
        out.push_back(p.segment(off, d));
        off += d;
    }
    return out;
}

Vector join(const std::vector<Vector>& parts) {
    Eigen::Index total = 0;
    for (const auto& v : parts) total += v.size();
    Vector out(total);
    Eigen::Index off = 0;
    for (const auto& v : parts) {
        out.segment(off, v.size()) = v;
        off += v.size();
    }
    return out;
}

// Disk direction of q seen from p: rotation angle of q after moving p to i.
cplx disk_direction(cplx p, cplx q) {
    const cplx qq = (q - p.real()) / p.imag();
    return (qq - I) / (qq + I);
}

bool contains_posdef(const Cat0Model& m) {
    if (std::holds_alternative<PosDefSpace>(m.kind)) return true;
    if (const auto* ps = std::get_if<ProductSpace>(&m.kind)) {
        return std::any_of(ps->factors.begin(), ps->factors.end(), contains_posdef);
    }
    return false;
}

}  // namespace

std::string model_name(const Cat0Model& m) {
    return std::visit(
        [](const auto& k) -> std::string {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, EuclideanSpace>) return "euclidean(" + std::to_string(k.n) + ")";
            else if constexpr (std::is_same_v<T, HyperbolicPlane>) return "hyperbolic";
            else if constexpr (std::is_same_v<T, PosDefSpace>) return "posdef(" + std::to_string(k.n) + ")";
            else {
                std::string s = "product(";
                for (std::size_t i = 0; i < k.factors.size(); ++i) {
                    if (i) s += ",";
                    s += model_name(k.factors[i]);
                }
                return s + ")";
            }
        },
        m.kind);
}

int point_dim(const Cat0Model& m) {
    return std::visit(
        [](const auto& k) -> int {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, EuclideanSpace>) return k.n;
            else if constexpr (std::is_same_v<T, HyperbolicPlane>) return 2;
            else if constexpr (std::is_same_v<T, PosDefSpace>) return k.n * k.n;
            else {
                int d = 0;
                for (const auto& f : k.factors) d += point_dim(f);
                return d;
            }
        },
        m.kind);
}

void validate_point(const Cat0Model& m, const Vector& p) {
    if (p.size() != point_dim(m)) throw DomainError(model_name(m) + ": wrong coordinate count");
    if (!p.allFinite()) throw DomainError(model_name(m) + ": non-finite coordinate");
    if (std::holds_alternative<HyperbolicPlane>(m.kind)) {
        if (!(p[1] > 0.0)) throw DomainError("hyperbolic: point must have positive imaginary part");
    } else if (const auto* pd = std::get_if<PosDefSpace>(&m.kind)) {
        const Matrix P = unflatten(p, pd->n);
        if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, P.norm())) {
            throw DomainError("posdef: matrix not symmetric");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(P), Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() <= 0.0) throw DomainError("posdef: matrix not positive definite");
        if (std::abs(es.eigenvalues().array().log().sum()) > 1e-8 * pd->n) {
            throw DomainError("posdef: determinant must be 1");
        }
    } else if (const auto* ps = std::get_if<ProductSpace>(&m.kind)) {
        const auto parts = split(*ps, p);
        for (std::size_t i = 0; i < parts.size(); ++i) validate_point(ps->factors[i], parts[i]);
    }
}

double dist(const Cat0Model& m, const Vector& p, const Vector& q) {
    validate_point(m, p);
    validate_point(m, q);
    if (std::holds_alternative<EuclideanSpace>(m.kind)) return (p - q).norm();
    if (std::holds_alternative<HyperbolicPlane>(m.kind)) return hyp_dist(as_complex(p), as_complex(q));
    if (const auto* pd = std::get_if<PosDefSpace>(&m.kind)) {
        const Matrix s = spd_inv_sqrt(unflatten(p, pd->n));
        const Matrix M = symmetrized(s * unflatten(q, pd->n) * s);
        Eigen::SelfAdjointEigenSolver<Matrix> es(M, Eigen::EigenvaluesOnly);
        return es.eigenvalues().array().log().matrix().norm();
    }
    const auto& ps = std::get<ProductSpace>(m.kind);
    const auto a = split(ps, p);
    const auto b = split(ps, q);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = dist(ps.factors[i], a[i], b[i]);
        s += d * d;
    }
    return std::sqrt(s);
}

Vector geodesic(const Cat0Model& m, const Vector& p, const Vector& q, double t) {
    validate_point(m, p);
    validate_point(m, q);
    if (t == 0.0) return p;
    if (t == 1.0) return q;
    if (std::holds_alternative<EuclideanSpace>(m.kind)) return (1.0 - t) * p + t * q;
    if (std::holds_alternative<HyperbolicPlane>(m.kind)) {
        const cplx zp = as_complex(p);
        const cplx zq = as_complex(q);
        const cplx w = disk_direction(zp, zq);
        if (std::abs(w) == 0.0) return p;
        const double d = hyp_dist(zp, zq);
        const cplx wt = std::tanh(0.5 * t * d) * (w / std::abs(w));
        const cplx zz = I * (1.0 + wt) / (1.0 - wt);
        return from_complex(zp.real() + zp.imag() * zz);
    }
    if (const auto* pd = std::get_if<PosDefSpace>(&m.kind)) {
        const Matrix P = unflatten(p, pd->n);
        const Matrix h = spd_sqrt(P);
        const Matrix hi = spd_inv_sqrt(P);
        const Matrix X = spd_log(symmetrized(hi * unflatten(q, pd->n) * hi));
        return flatten(symmetrized(h * sym_exp(t * X) * h));
    }
    const auto& ps = std::get<ProductSpace>(m.kind);
    const auto a = split(ps, p);
    const auto b = split(ps, q);
    std::vector<Vector> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(geodesic(ps.factors[i], a[i], b[i], t));
    return join(out);
}

double comparison_check(const Cat0Model& m, const Vector& x1, const Vector& x2, const Vector& x3, double s) {
    if (!(s >= 0.0 && s <= 1.0)) throw ContractViolation("comparison_check: s must lie in [0, 1]");
    const double a = dist(m, x1, x2);
    const double b = dist(m, x1, x3);
    const double c = dist(m, x2, x3);
    const double scale = std::max({1.0, a, b, c});
    const double slack = 1e-9 * scale;
    if (a > b + c + slack || b > a + c + slack || c > a + b + slack) {
        throw MetricDefect("comparison_check: distances violate the triangle inequality");
    }
    if (s == 0.0 || s == 1.0) return 0.0;
    // degenerate (collinear) triangles short-circuit
    if (a + b <= c + 1e-14 * scale || a + c <= b + 1e-14 * scale || b + c <= a + 1e-14 * scale) return 0.0;

    // comparison triangle: x2' = 0, x3' = (c, 0); height from Kahan's stable area formula
    double e[3] = {a, b, c};
    std::sort(e, e + 3, std::greater<>());
    const double A = e[0], B = e[1], C = e[2];
    const double area4 = std::sqrt(std::max(0.0, (A + (B + C)) * (C - (A - B)) * (C + (A - B)) * (A + (B - C))));
    const double hx = (a * a + c * c - b * b) / (2.0 * c);
    const double hy = area4 / (2.0 * c);
    const double comp = std::hypot(hx - s * c, hy);

    const Vector p = geodesic(m, x2, x3, s);
    return comp - dist(m, x1, p);
}

Vector ray_point(const Cat0Model& m, const GeodesicRay& c, double t) {
    if (std::holds_alternative<EuclideanSpace>(m.kind)) return c.base + t * c.direction;
    if (std::holds_alternative<HyperbolicPlane>(m.kind)) {
        const cplx pt = chart(c.endpoint, as_complex(c.base));
        return from_complex(unchart(c.endpoint, cplx(pt.real(), pt.imag() * std::exp(t))));
    }
    if (const auto* pd = std::get_if<PosDefSpace>(&m.kind)) {
        const Matrix h = spd_sqrt(unflatten(c.base, pd->n));
        return flatten(symmetrized(h * sym_exp(t * unflatten(c.direction, pd->n)) * h));
    }
    const auto& ps = std::get<ProductSpace>(m.kind);
    std::vector<Vector> out;
    for (std::size_t i = 0; i < ps.factors.size(); ++i) out.push_back(ray_point(ps.factors[i], c.parts[i], c.speeds[i] * t));
    return join(out);
}

GeodesicRay ray_through(const Cat0Model& m, const Vector& p, const Vector& q) {
    validate_point(m, p);
    validate_point(m, q);
    GeodesicRay c;
    c.base = p;
    if (const auto* e = std::get_if<EuclideanSpace>(&m.kind)) {
        const double d = (q - p).norm();
        if (d > 0.0) {
            c.direction = (q - p) / d;
        } else {
            c.direction = Vector::Unit(e->n, 0);
        }
        return c;
    }
    if (std::holds_alternative<HyperbolicPlane>(m.kind)) {
        const cplx w = disk_direction(as_complex(p), as_complex(q));
        if (std::abs(w) == 0.0) return c;  // upward vertical ray
        const double phi = std::arg(w);
        if (std::abs(phi) < 1e-14) return c;
        c.endpoint = p[0] - p[1] / std::tan(0.5 * phi);
        return c;
    }
    if (const auto* pd = std::get_if<PosDefSpace>(&m.kind)) {
        const Matrix hi = spd_inv_sqrt(unflatten(p, pd->n));
        Matrix X = spd_log(symmetrized(hi * unflatten(q, pd->n) * hi));
        if (X.norm() <= 1e-14) {
            X = Matrix::Zero(pd->n, pd->n);
            X(0, 0) = 1.0;
            X(1, 1) = -1.0;
        }
        c.direction = flatten(X / X.norm());
        return c;
    }
    const auto& ps = std::get<ProductSpace>(m.kind);
    const auto a = split(ps, p);
    const auto b = split(ps, q);
    std::vector<double> d;
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d.push_back(dist(ps.factors[i], a[i], b[i]));
        total += d.back() * d.back();
    }
    total = std::sqrt(total);
    for (std::size_t i = 0; i < a.size(); ++i) {
        c.parts.push_back(ray_through(ps.factors[i], a[i], b[i]));
        c.speeds.push_back(total > 0.0 ? d[i] / total : (i == 0 ? 1.0 : 0.0));
    }
    return c;
}

GeodesicRay asymptotic_ray(const Cat0Model& m, const GeodesicRay& c, const Vector& p2) {
    if (contains_posdef(m)) throw Unsupported("asymptotic_ray: not available on the positive-definite model");
    validate_point(m, p2);
    GeodesicRay out = c;
    out.base = p2;
    if (const auto* ps = std::get_if<ProductSpace>(&m.kind)) {
        const auto parts = split(*ps, p2);
        for (std::size_t i = 0; i < parts.size(); ++i) out.parts[i] = asymptotic_ray(ps->factors[i], c.parts[i], parts[i]);
    }
    return out;
}

double ray_separation(const Cat0Model& m, const GeodesicRay& c1, const GeodesicRay& c2, double t) {
    if (std::holds_alternative<HyperbolicPlane>(m.kind) && c1.endpoint == c2.endpoint) {
        const cplx a = chart(c1.endpoint, as_complex(c1.base));
        const cplx b = chart(c2.endpoint, as_complex(c2.base));
        // |T c1(t) - T c2(t)| / (2 sqrt(y1 y2) e^t) without forming e^t
        const cplx delta((a.real() - b.real()) * std::exp(-t), a.imag() - b.imag());
        return 2.0 * std::asinh(std::abs(delta) / (2.0 * std::sqrt(a.imag() * b.imag())));
    }
    if (const auto* ps = std::get_if<ProductSpace>(&m.kind)) {
        double s = 0.0;
        for (std::size_t i = 0; i < ps->factors.size(); ++i) {
            if (c1.speeds[i] != c2.speeds[i]) return dist(m, ray_point(m, c1, t), ray_point(m, c2, t));
            const double d = ray_separation(ps->factors[i], c1.parts[i], c2.parts[i], c1.speeds[i] * t);
            s += d * d;
        }
        return std::sqrt(s);
    }
    return dist(m, ray_point(m, c1, t), ray_point(m, c2, t));
}

RayDistance ray_distance(const Cat0Model& m, const Vector& q, const GeodesicRay& c, double t_max) {
    validate_point(m, q);
    if (t_max <= 0.0) t_max = dist(m, c.base, q) + 10.0;
    auto f = [&](double t) { return dist(m, q, ray_point(m, c, t)); };
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = t_max;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    const double width = 1e-10 * std::max(1.0, t_max);
    for (int it = 0; it < 300 && hi - lo > width; ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        }
    }
    RayDistance out;
    out.t_star = 0.5 * (lo + hi);
    out.d = f(out.t_star);
    for (double t : {0.0, t_max}) {
        const double v = f(t);
        if (v < out.d) {
            out.d = v;
            out.t_star = t;
        }
    }
    out.horizon_limited = out.t_star >= t_max - 1e-6 * std::max(1.0, t_max);
    return out;
}

Matrix Isometry::mobius() const {
    Matrix A(2, 2);
    const double sa = std::sqrt(scale);
    A << sa, shift / sa, 0.0, 1.0 / sa;
    if (!fixed_endpoint) return A;
    const double xi = *fixed_endpoint;
    Matrix T(2, 2), Ti(2, 2);
    T << 0.0, -1.0, 1.0, -xi;
    Ti << -xi, 1.0, -1.0, 0.0;
    return Ti * A * T;
}

Vector apply_isometry(const Cat0Model& m, const Isometry& g, const Vector& p) {
    if (std::holds_alternative<EuclideanSpace>(m.kind)) return p + g.translation;
    if (std::holds_alternative<HyperbolicPlane>(m.kind)) {
        const cplx w = chart(g.fixed_endpoint, as_complex(p));
        return from_complex(unchart(g.fixed_endpoint, g.scale * w + g.shift));
    }
    if (const auto* ps = std::get_if<ProductSpace>(&m.kind)) {
        const auto parts = split(*ps, p);
        std::vector<Vector> out;
        for (std::size_t i = 0; i < parts.size(); ++i) out.push_back(apply_isometry(ps->factors[i], g.parts[i], parts[i]));
        return join(out);
    }
    throw Unsupported("apply_isometry: unsupported model");
}

PropertySWitness property_s_witness(const Cat0Model& m, const Vector& p0, const Vector& p, const Vector& q) {
    if (contains_posdef(m)) throw Unsupported("property_s_witness: not available on the positive-definite model");
    validate_point(m, p0);
    validate_point(m, p);
    validate_point(m, q);
    PropertySWitness w;
    if (std::holds_alternative<EuclideanSpace>(m.kind)) {
        w.g.translation = p0 - p;
        w.r = (p0 - p).norm();
        w.b = 0.0;
        w.bound = w.r;
        return w;
    }
    if (std::holds_alternative<HyperbolicPlane>(m.kind)) {
        const GeodesicRay c = ray_through(m, p, q);
        w.g.fixed_endpoint = c.endpoint;
        const cplx pt = chart(c.endpoint, as_complex(p));
        const cplx p0t = chart(c.endpoint, as_complex(p0));
        w.g.scale = p0t.imag() / pt.imag();
        w.g.shift = p0t.real() - w.g.scale * pt.real();
        w.r = dist(m, p, p0);
        w.b = (q - p).norm() == 0.0 ? 0.0 : ray_distance(m, q, c).d;
        w.bound = w.r + 2.0 * w.b;
        return w;
    }
    const auto& ps = std::get<ProductSpace>(m.kind);
    const auto a0 = split(ps, p0);
    const auto a = split(ps, p);
    const auto aq = split(ps, q);
    double r2 = 0.0, b2 = 0.0, bound2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        PropertySWitness part = property_s_witness(ps.factors[i], a0[i], a[i], aq[i]);
        r2 += part.r * part.r;
        b2 += part.b * part.b;
        bound2 += part.bound * part.bound;
        w.g.parts.push_back(std::move(part.g));
    }
    w.r = std::sqrt(r2);
    w.b = std::sqrt(b2);
    w.bound = std::sqrt(bound2);
    return w;
}

Vector random_point(const Cat0Model& m, std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    if (const auto* e = std::get_if<EuclideanSpace>(&m.kind)) {
        Vector v(e->n);
        for (int i = 0; i < e->n; ++i) v[i] = u(rng);
        return v;
    }
    if (std::holds_alternative<HyperbolicPlane>(m.kind)) {
        Vector v(2);
        v << u(rng), std::exp(u(rng));
        return v;
    }
    if (const auto* pd = std::get_if<PosDefSpace>(&m.kind)) {
        const int n = pd->n;
        std::normal_distribution<double> g;
        Matrix A(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) A(i, j) = g(rng);
        }
        Eigen::HouseholderQR<Matrix> qr(A);
        const Matrix Q = qr.householderQ();
        Vector x(n);
        for (int i = 0; i < n; ++i) x[i] = u(rng);
        x.array() -= x.mean();
        const Matrix P = Q * x.array().exp().matrix().asDiagonal() * Q.transpose();
        return flatten(symmetrized(P));
    }
    const auto& ps = std::get<ProductSpace>(m.kind);
    std::vector<Vector> parts;
    for (const auto& f : ps.factors) parts.push_back(random_point(f, rng, scale));
    return join(parts);
}

}  // namespace propcrit
