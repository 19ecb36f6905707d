#include "propcrit/quotient.hpp"

#include "propcrit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>

namespace propcrit {
namespace {

bool same_model(const QuotientModel& a, const QuotientModel& b) {
    return a.index() == b.index() && model_size(a) == model_size(b);
}

Vector sorted_desc(Vector v) {
    std::sort(v.data(), v.data() + v.size(), std::greater<>());
    return v;
}

// min over permutations w of ||a - w b||
double min_over_permutations(const Vector& a, const Vector& b) {
    std::vector<int> perm(static_cast<std::size_t>(b.size()));
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double s = 0.0;
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[perm[static_cast<std::size_t>(i)]];
            s += d * d;
        }
        best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::sqrt(best);
}

Vector random_sum_zero(int n, double scale, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = g(rng);
    x.array() -= x.mean();
    return scale * x;
}

Vector random_section(const QuotientModel& m, double scale, std::mt19937_64& rng) {
    if (std::holds_alternative<EuclideanOrth>(m)) {
        std::uniform_real_distribution<double> u(-scale, scale);
        return Vector::Constant(1, u(rng));
    }
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return random_sum_zero(model_size(m), scale * u(rng), rng);
}

// Euclidean distance between section points, evaluated through the model metric.
double section_distance(const QuotientModel& m, const Vector& x, const Vector& y, const Tolerance& tol) {
    return model_distance(m, section_point(m, x), section_point(m, y), tol);
}

}  // namespace

int model_size(const QuotientModel& m) {
    return std::visit([](const auto& v) { return v.n; }, m);
}

int section_dim(const QuotientModel& m) {
    return std::holds_alternative<EuclideanOrth>(m) ? 1 : model_size(m);
}

double pdist(const Matrix& p, const Matrix& q, const Tolerance& tol) {
    if (p.rows() != q.rows() || p.cols() != q.cols() || p.rows() != p.cols()) {
        throw ContractViolation("pdist: size mismatch");
    }
    const Matrix s = spd_inv_sqrt(p, tol);
    Matrix m = s * q * s;
    m = 0.5 * (m + m.transpose());
    const SymEig e = sym_eig(m, tol);
    if (e.lam.minCoeff() <= 0.0) throw DomainError("pdist: second argument is not positive definite");
    return e.lam.array().log().matrix().norm();
}

double model_distance(const QuotientModel& m, const Matrix& p, const Matrix& q, const Tolerance& tol) {
    if (std::holds_alternative<EuclideanOrth>(m)) return (p - q).norm();
    return pdist(p, q, tol);
}

Matrix act(const QuotientModel& m, const Matrix& k, const Matrix& p) {
    if (std::holds_alternative<EuclideanOrth>(m)) return k * p;
    return k * p * k.transpose();
}

Matrix base_point(const QuotientModel& m) {
    const int n = model_size(m);
    if (std::holds_alternative<EuclideanOrth>(m)) {
        Matrix e = Matrix::Zero(n, 1);
        e(0, 0) = 1.0;
        return e;
    }
    return Matrix::Identity(n, n);
}

OrbitPoint orbit_of(const QuotientModel& m, const Matrix& p, const Tolerance& tol) {
    const int n = model_size(m);
    OrbitPoint o{m, Vector()};
    if (std::holds_alternative<EuclideanOrth>(m)) {
        if (p.rows() != n || p.cols() != 1) throw ContractViolation("orbit_of: expected a column vector");
        o.canonical = Vector::Constant(1, p.norm());
        return o;
    }
    if (p.rows() != n || p.cols() != n) throw ContractViolation("orbit_of: size mismatch");
    const SymEig e = sym_eig(p, tol);
    if (e.lam.minCoeff() <= tol.eps_rank) throw DomainError("orbit_of: matrix is not positive definite");
    o.canonical = e.lam.array().log().matrix();
    return o;
}

double quotient_distance(const OrbitPoint& a, const OrbitPoint& b) {
    if (!same_model(a.model, b.model)) throw ContractViolation("quotient_distance: model mismatch");
    if (std::holds_alternative<EuclideanOrth>(a.model)) return std::abs(a.canonical[0] - b.canonical[0]);
    return min_over_permutations(a.canonical, b.canonical);
}

Matrix section_point(const QuotientModel& m, const Vector& x) {
    if (x.size() != section_dim(m)) throw ContractViolation("section_point: coordinate size");
    if (std::holds_alternative<EuclideanOrth>(m)) {
        Matrix e = Matrix::Zero(model_size(m), 1);
        e(0, 0) = x[0];
        return e;
    }
    return x.array().exp().matrix().asDiagonal();
}

Vector section_canonical(const QuotientModel& m, const Vector& x) {
    if (x.size() != section_dim(m)) throw ContractViolation("section_canonical: coordinate size");
    if (std::holds_alternative<EuclideanOrth>(m)) return Vector::Constant(1, std::abs(x[0]));
    return sorted_desc(x);
}

Vector section_lift(const QuotientModel& m, const Vector& c) {
    if (c.size() != section_dim(m)) throw ContractViolation("section_lift: coordinate size");
    return c;
}

std::vector<Vector> orbit_section_intersection(const QuotientModel& m, const Vector& x) {
    if (x.size() != section_dim(m)) throw ContractViolation("orbit_section_intersection: coordinate size");
    if (std::holds_alternative<EuclideanOrth>(m)) {
        if (x[0] == 0.0) return {x};
        return {x.cwiseAbs(), -x.cwiseAbs()};
    }
    return weyl_orbit(x);
}

std::vector<Vector> theta(const QuotientModel& m, std::span<const Vector> C) {
    std::vector<Vector> out;
    std::set<std::vector<double>> seen;
    auto add = [&](const Vector& v) {
        if (seen.insert(std::vector<double>(v.data(), v.data() + v.size())).second) out.push_back(v);
    };
    for (const auto& x : C) add(x);
    for (const auto& x : C) {
        for (const auto& w : orbit_section_intersection(m, x)) add(w);
    }
    return out;
}

Matrix random_rotation(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Matrix A(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) A(i, j) = g(rng);
    }
    Eigen::HouseholderQR<Matrix> qr(A);
    Matrix Q = qr.householderQ();
    const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        if (R(j, j) < 0) Q.col(j) *= -1.0;
    }
    if (Q.determinant() < 0) Q.col(0) *= -1.0;
    return Q;
}

SectionCheck validate_orbit_section(const PosDefConj& m, const Vector& x, double mesh, double near,
                                    double tolerance, std::uint64_t seed) {
    const int n = m.n;
    if (x.size() != n) throw ContractViolation("validate_orbit_section: coordinate size");
    const std::vector<Vector> orbit = weyl_orbit(x);
    const Matrix p = section_point(QuotientModel{m}, x);
    SectionCheck out;

    auto inspect = [&](const Matrix& q) {
        ++out.samples;
        const Matrix off = q - Matrix(q.diagonal().asDiagonal());
        if (off.norm() > near) return;
        ++out.near_section;
        const Vector d = q.diagonal().array().log().matrix();
        double best = std::numeric_limits<double>::infinity();
        for (const auto& w : orbit) best = std::min(best, (d - w).norm());
        out.worst_offset = std::max(out.worst_offset, best);
        if (best > tolerance) ++out.stray;
    };

    if (n == 2) {
        const auto steps = static_cast<long>(std::ceil(2.0 * std::numbers::pi / mesh));
        for (long s = 0; s < steps; ++s) {
            const double t = 2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(steps);
            Matrix k(2, 2);
            k << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
            inspect(k * p * k.transpose());
        }
        return out;
    }

    std::mt19937_64 rng(seed);
    const int starts = 64;
    for (int s = 0; s < starts; ++s) {
        Matrix q = [&] {
            const Matrix k = random_rotation(n, rng);
            return Matrix(k * p * k.transpose());
        }();
        inspect(q);
        // cyclic Jacobi sweeps; every rotation is an element of K, so each
        // iterate is again a point of the orbit K.p
        for (int sweep = 0; sweep < 12; ++sweep) {
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    if (std::abs(q(i, j)) < 1e-300) continue;
                    const double th = 0.5 * std::atan2(2.0 * q(i, j), q(i, i) - q(j, j));
                    Matrix J = Matrix::Identity(n, n);
                    J(i, i) = std::cos(th);
                    J(j, j) = std::cos(th);
                    J(i, j) = std::sin(th);
                    J(j, i) = -std::sin(th);
                    q = J * q * J.transpose();
                    q = 0.5 * (q + q.transpose());
                    inspect(q);
                }
            }
        }
        // plus a local net around the final iterate at the requested mesh
        const Matrix q0 = q;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                for (int step = -3; step <= 3; ++step) {
                    const double th = step * mesh;
                    Matrix J = Matrix::Identity(n, n);
                    J(i, i) = std::cos(th);
                    J(j, j) = std::cos(th);
                    J(i, j) = -std::sin(th);
                    J(j, i) = std::sin(th);
                    inspect(J * q0 * J.transpose());
                }
            }
        }
    }
    const int extra = 2000;
    for (int s = 0; s < extra; ++s) {
        const Matrix k = random_rotation(n, rng);
        inspect(k * p * k.transpose());
    }
    return out;
}

NonexpandingReport verify_nonexpanding_conditions(const QuotientModel& m, std::size_t samples,
                                                  std::uint64_t seed, const Tolerance& tol) {
    if (samples < 1) throw ContractViolation("verify_nonexpanding_conditions: samples must be >= 1");
    std::mt19937_64 rng(seed);
    NonexpandingReport rep;
    rep.samples = samples;
    for (std::size_t s = 0; s < samples; ++s) {
        const Vector x = random_section(m, 3.0, rng);
        const Vector y = random_section(m, 3.0, rng);
        const OrbitPoint ex{m, section_canonical(m, x)};
        const OrbitPoint ey{m, section_canonical(m, y)};
        const double d1 = quotient_distance(ex, ey) - section_distance(m, x, y, tol);
        rep.max_condition1_violation = std::max(rep.max_condition1_violation, d1);

        // realizer of y' = eta(z) against x
        const Vector z = random_section(m, 3.0, rng);
        const OrbitPoint target{m, section_canonical(m, z)};
        Vector realizer;
        if (std::holds_alternative<EuclideanOrth>(m)) {
            realizer = Vector::Constant(1, (x[0] < 0 ? -1.0 : 1.0) * target.canonical[0]);
        } else {
            std::vector<int> order(static_cast<std::size_t>(x.size()));
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return x[a] > x[b]; });
            realizer = Vector(x.size());
            for (std::size_t r = 0; r < order.size(); ++r) {
                realizer[order[r]] = target.canonical[static_cast<Eigen::Index>(r)];
            }
        }
        const Vector back = section_canonical(m, realizer);
        if ((back - target.canonical).norm() > tol.eps_geom) {
            throw NumericalFailure("realizer left the target orbit");
        }
        const double d2 = std::abs(section_distance(m, x, realizer, tol) - quotient_distance(ex, target));
        rep.max_condition2_residual = std::max(rep.max_condition2_residual, d2);
    }
    return rep;
}

LemmaReport verify_lemma_neighborhoods(const QuotientModel& m, std::span<const Vector> C,
                                       std::span<const Vector> Cq, double r, std::size_t probes,
                                       std::uint64_t seed, const Tolerance& tol) {
    if (!(r >= 0.0)) throw ContractViolation("verify_lemma_neighborhoods: negative radius");
    if (C.empty() || Cq.empty()) throw ContractViolation("verify_lemma_neighborhoods: empty sets");
    const double band = 10.0 * tol.eps_geom;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pickC(0, C.size() - 1);
    std::uniform_int_distribution<std::size_t> pickQ(0, Cq.size() - 1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // eta^{-1}(C'): lifts of every canonical form, saturated
    std::vector<Vector> lifts;
    for (const auto& c : Cq) lifts.push_back(section_lift(m, c));
    const std::vector<Vector> preimage = theta(m, lifts);
    std::vector<OrbitPoint> etaC;
    for (const auto& c : C) etaC.push_back({m, section_canonical(m, c)});

    LemmaReport rep;
    auto record = [&](double lhs, double rhs, const Vector& probe) {
        rep.worst_discrepancy = std::max(rep.worst_discrepancy, std::abs(lhs - rhs));
        const bool in_l = lhs <= r + tol.eps_geom;
        const bool in_r = rhs <= r + tol.eps_geom;
        if (in_l != in_r && std::abs(lhs - r) > band && std::abs(rhs - r) > band) {
            ++rep.counterexamples;
            if (!rep.first_counterexample) rep.first_counterexample = probe;
        }
    };
    auto perturb = [&](const Vector& base) {
        Vector noise = random_section(m, 1.0, rng);
        if (noise.norm() > 0) noise *= (2.0 * r + 1.0) * unif(rng) / noise.norm();
        Vector p = base + noise;
        if (std::holds_alternative<PosDefConj>(m)) p.array() -= p.mean();
        return p;
    };

    for (std::size_t t = 0; t < probes; ++t) {
        ++rep.probes;
        // eta^{-1}(N_r(C')) vs N_r(eta^{-1}(C')) at a section probe x
        {
            const Vector x = perturb(preimage[pickQ(rng) % preimage.size()]);
            const OrbitPoint ex{m, section_canonical(m, x)};
            double lhs = std::numeric_limits<double>::infinity();
            for (const auto& c : Cq) lhs = std::min(lhs, quotient_distance(ex, OrbitPoint{m, c}));
            double rhs = std::numeric_limits<double>::infinity();
            for (const auto& v : preimage) rhs = std::min(rhs, section_distance(m, x, v, tol));
            record(lhs, rhs, x);
        }
        // eta(N_r(C)) vs N_r(eta(C)) at a quotient probe y'
        {
            const Vector y = perturb(C[pickC(rng)]);
            const Vector yc = section_canonical(m, y);
            const OrbitPoint ey{m, yc};
            double rhs = std::numeric_limits<double>::infinity();
            for (const auto& e : etaC) rhs = std::min(rhs, quotient_distance(ey, e));
            double lhs = std::numeric_limits<double>::infinity();
            for (const auto& w : orbit_section_intersection(m, section_lift(m, yc))) {
                for (const auto& c : C) lhs = std::min(lhs, section_distance(m, w, c, tol));
            }
            record(lhs, rhs, y);
        }
    }
    return rep;
}

Vector cartan_to_canonical(const Vector& a) { return 2.0 * a; }
Vector canonical_to_cartan(const Vector& c) { return 0.5 * c; }

OrbitPoint mu(const Matrix& g, const PosDefConj& m, const Tolerance& tol) {
    if (g.rows() != m.n || g.cols() != m.n) throw ContractViolation("mu: size mismatch with model");
    return OrbitPoint{QuotientModel{m}, cartan_to_canonical(cartan_projection(g, tol))};
}

StructuredSet sigma_of_subgroup(const AmbientGroup& G, const SubgroupSpec& spec, int word_length,
                                const Tolerance& tol) {
    if (G.kind() != GroupKind::SL) throw ContractViolation("sigma_of_subgroup: SL ambient required");
    StructuredSet a = a_of_subgroup(G, spec, word_length, tol);
    if (auto* cloud = std::get_if<PointCloud>(&a.data)) {
        for (auto& p : cloud->points) p = cartan_to_canonical(p);
    }
    return a;
}

}  // namespace propcrit
