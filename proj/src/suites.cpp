#include "propcrit/suites.hpp"

#include "propcrit/catzero.hpp"
#include "propcrit/errors.hpp"
#include "propcrit/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>
#include <sstream>

namespace propcrit {
namespace {

SuiteCheck at_most(std::string name, double worst, double threshold, std::size_t count, std::string detail = {}) {
    return SuiteCheck{std::move(name), worst <= threshold, worst, threshold, count, std::move(detail)};
}

SuiteCheck zero_count(std::string name, std::size_t bad, std::size_t count, std::string detail = {}) {
    return SuiteCheck{std::move(name), bad == 0, static_cast<double>(bad), 0.0, count, std::move(detail)};
}

Vector gaussian(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = nd(rng);
    return v;
}

Vector unit(int n, std::mt19937_64& rng) {
    Vector v = gaussian(n, rng);
    while (v.norm() < 1e-6) v = gaussian(n, rng);
    return v / v.norm();
}

/// Uniform direction in the sum-zero plane of R^n, scaled to `len`.
Vector sum_zero(int n, double len, std::mt19937_64& rng) {
    Vector v = gaussian(n, rng);
    v.array() -= v.mean();
    while (v.norm() < 1e-6) {
        v = gaussian(n, rng);
        v.array() -= v.mean();
    }
    return v * (len / v.norm());
}

double uniform(std::mt19937_64& rng, double a = 0.0, double b = 1.0) {
    return std::uniform_real_distribution<double>(a, b)(rng);
}

Matrix one_param(std::initializer_list<double> diag) {
    Vector d(static_cast<Eigen::Index>(diag.size()));
    Eigen::Index i = 0;
    for (double x : diag) d[i++] = x;
    return d.asDiagonal();
}

Matrix rotation2(double angle) {
    Matrix R(2, 2);
    R << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return R;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

// ---------------------------------------------------------------------------
// random subspace unions in R^3 / R^4, dimensions <= 2, at most 3 components

struct SpanPair {
    int d = 3;
    std::vector<Matrix> s1, s2;
};

SpanPair random_span_pair(std::mt19937_64& rng, double share_probability) {
    SpanPair out;
    out.d = std::uniform_int_distribution<int>(3, 4)(rng);
    std::uniform_int_distribution<int> comps(1, 3), dims(1, 2);
    for (auto* s : {&out.s1, &out.s2}) {
        const int c = comps(rng);
        for (int i = 0; i < c; ++i) {
            const int k = dims(rng);
            Matrix B(out.d, k);
            for (int j = 0; j < k; ++j) B.col(j) = unit(out.d, rng);
            s->push_back(B);
        }
    }
    if (uniform(rng) < share_probability) {
        const Vector v = unit(out.d, rng);
        out.s1[std::uniform_int_distribution<std::size_t>(0, out.s1.size() - 1)(rng)].col(0) = v;
        out.s2[std::uniform_int_distribution<std::size_t>(0, out.s2.size() - 1)(rng)].col(0) = v;
    }
    return out;
}

// ---------------------------------------------------------------------------
// four-condition agreement for random cloud configurations in the section of P(n)

struct FourConditionResult {
    std::size_t configs = 0;
    std::size_t disagreements = 0;
    std::size_t not_hbi = 0;
    double worst_norm_spread = 0.0;
};

FourConditionResult four_conditions(int n, std::size_t configs, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const QuotientModel m = PosDefConj{n};
    constexpr double r = 1.0;
    constexpr double R = 1000.0;
    constexpr double headroom = 0.5;
    std::vector<double> ts;
    for (double t = 1.0; t <= R; t *= 1.1) ts.push_back(t);

    auto ray_cloud = [&](const std::vector<Vector>& dirs) {
        std::vector<Vector> pts;
        for (const auto& v : dirs) {
            for (double t : ts) pts.push_back(t * v + sum_zero(n, uniform(rng, 0.0, r / 4.0), rng));
        }
        return pts;
    };

    FourConditionResult out;
    out.configs = configs;
    for (std::size_t c = 0; c < configs; ++c) {
        std::vector<Vector> d1, d2;
        const int k1 = std::uniform_int_distribution<int>(1, 2)(rng);
        for (int i = 0; i < k1; ++i) d1.push_back(sum_zero(n, 1.0, rng));
        if (uniform(rng) < 0.5) {
            // a non-trivial Weyl image of a direction of C1
            std::vector<int> perm(static_cast<std::size_t>(n));
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            if (std::is_sorted(perm.begin(), perm.end())) std::swap(perm[0], perm[1]);
            Vector w(n);
            for (int i = 0; i < n; ++i) w[i] = d1[0][perm[static_cast<std::size_t>(i)]];
            d2.push_back(w);
        } else {
            d2.push_back(sum_zero(n, 1.0, rng));
        }
        const std::vector<Vector> C1 = ray_cloud(d1);
        const std::vector<Vector> C2 = ray_cloud(d2);
        const std::vector<Vector> T1 = theta(m, C1);
        const std::vector<Vector> T2 = theta(m, C2);

        const double a = hbi_check_sampled(C1, T2, r, R, headroom).max_norm;
        const double b = hbi_check_sampled(T1, C2, r, R, headroom).max_norm;
        const double cc = hbi_check_sampled(T1, T2, r, R, headroom).max_norm;
        // eta-images compared with d^K directly
        std::vector<OrbitPoint> e1, e2;
        for (const auto& x : C1) e1.push_back({m, section_canonical(m, x)});
        for (const auto& y : C2) e2.push_back({m, section_canonical(m, y)});
        double d = 0.0;
        for (const auto& x : e1) {
            const double nx = x.canonical.norm();
            if (nx <= d) continue;
            for (const auto& y : e2) {
                if (quotient_distance(x, y) <= r) {
                    d = nx;
                    break;
                }
            }
        }
        const bool va = a < headroom * R, vb = b < headroom * R, vc = cc < headroom * R, vd = d < headroom * R;
        if (!(va == vb && vb == vc && vc == vd)) ++out.disagreements;
        if (!va) ++out.not_hbi;
        const double hi = std::max({a, b, cc, d});
        const double lo = std::min({a, b, cc, d});
        out.worst_norm_spread = std::max(out.worst_norm_spread, hi - lo);
    }
    return out;
}

// ---------------------------------------------------------------------------
// helpers on P(n) = SL(n)/SO(n) with base point I

Vector canonical_of(const Matrix& g) { return 2.0 * cartan_projection(g); }

double dist_to_SH(const Vector& c, const std::vector<Vector>& sh, int n) {
    const QuotientModel m = PosDefConj{n};
    const OrbitPoint x{m, c};
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : sh) best = std::min(best, quotient_distance(x, OrbitPoint{m, s}));
    return best;
}

/// Element of D_r: k1 exp(diag a) k2 with ||a|| <= r/2, the boundary hit one time in eight.
Matrix random_in_D(int n, double r, std::mt19937_64& rng) {
    const double len = (uniform(rng) < 0.125 ? 1.0 : uniform(rng)) * r / 2.0;
    const Vector a = sum_zero(n, len, rng);
    return random_rotation(n, rng) * Matrix(a.array().exp().matrix().asDiagonal()) * random_rotation(n, rng);
}

}  // namespace

Matrix random_sl(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Matrix g(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) g(i, j) = nd(rng);
    }
    double det = g.determinant();
    while (std::abs(det) < 1e-3) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) g(i, j) = nd(rng);
        }
        det = g.determinant();
    }
    if (det < 0) {
        g.row(0) *= -1.0;
        det = -det;
    }
    return g / std::pow(det, 1.0 / n);
}

// ---------------------------------------------------------------------------

SuiteReport kak_suite(std::size_t per_n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    double resid = 0.0, orth = 0.0;
    std::size_t bad_det = 0, count = 0;
    for (int n = 2; n <= 6; ++n) {
        for (std::size_t s = 0; s < per_n; ++s) {
            const Matrix g = random_sl(n, rng);
            const Kak f = kak_decompose(g);
            const Matrix back = f.k1 * Matrix(f.x.array().exp().matrix().asDiagonal()) * f.k2;
            resid = std::max(resid, (back - g).norm() / g.norm());
            orth = std::max({orth, orthogonality_defect(f.k1), orthogonality_defect(f.k2)});
            if (std::abs(f.k1.determinant() - 1.0) > 1e-9 || std::abs(f.k2.determinant() - 1.0) > 1e-9) ++bad_det;
            ++count;
        }
    }
    SuiteReport rep{"kak", {}};
    rep.checks.push_back(at_most("reconstruction residual (relative Frobenius)", resid, 1e-9, count));
    rep.checks.push_back(at_most("factor orthogonality defect", orth, 1e-10, count));
    rep.checks.push_back(zero_count("factors in SO(n)", bad_det, count));
    return rep;
}

SuiteReport cartan_laws_suite(std::size_t pairs, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::size_t bad_inv = 0, bad_k = 0, bad_lip = 0;
    double w_inv = 0.0, w_k = 0.0, w_lip = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < pairs; ++s) {
        const int n = 2 + static_cast<int>(s % 5);
        const Matrix g = random_sl(n, rng);
        const Matrix h = random_sl(n, rng);
        const Vector mg = cartan_projection(g);
        const double scale = std::max(1.0, mg.norm());

        const Vector inv = cartan_projection(g.inverse());
        const double e_inv = (inv + mg.reverse()).norm() / scale;
        w_inv = std::max(w_inv, e_inv);
        if (e_inv > 1e-9) ++bad_inv;

        const Matrix gk = random_rotation(n, rng) * g * random_rotation(n, rng);
        const double e_k = (cartan_projection(gk) - mg).norm() / scale;
        w_k = std::max(w_k, e_k);
        if (e_k > 1e-9) ++bad_k;

        const double lip = (cartan_projection(g * h) - mg).norm() - cartan_projection(h).norm();
        w_lip = std::max(w_lip, lip);
        if (lip > 1e-9) ++bad_lip;
    }
    SuiteReport rep{"cartan-laws", {}};
    rep.checks.push_back(zero_count("mu(g^-1) = reverse(-mu(g))", bad_inv, pairs, "worst " + fmt(w_inv)));
    rep.checks.push_back(zero_count("bi-K-invariance", bad_k, pairs, "worst " + fmt(w_k)));
    rep.checks.push_back(zero_count("||mu(gh) - mu(g)|| <= ||mu(h)|| + 1e-9", bad_lip, pairs,
                                    "worst excess " + fmt(w_lip)));
    return rep;
}

SuiteReport hbi_agreement_suite(std::size_t instances, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    constexpr double R = 1000.0;
    constexpr double r = 10.0;
    constexpr double min_gap = 0.05;
    std::size_t done = 0, skipped = 0, disagree = 0, bound_bad = 0, hbi = 0;
    double worst_ratio = 0.0;
    while (done < instances) {
        const SpanPair sp = random_span_pair(rng, 0.35);
        const StructuredSet C1 = StructuredSet::subspaces(sp.d, sp.s1);
        const StructuredSet C2 = StructuredSet::subspaces(sp.d, sp.s2);
        const HbiCertificate cert = hbi_decide(C1, C2);
        if (cert.verdict && cert.gap < min_gap) {
            ++skipped;  // intersection radius r/sin(gap) beyond the exploration headroom
            continue;
        }
        ++done;
        SamplingPlan plan;
        plan.radius = R;
        plan.radial_step = r;
        plan.radial_ratio = 1.1;
        plan.directions = 720;
        plan.seed = seed + done;
        const auto P1 = sample_set(C1, plan);
        const auto P2 = sample_set(C2, plan);
        const SampledHbi s = hbi_check_sampled(P1, P2, r, R);
        if (s.empirically_hbi != cert.verdict) ++disagree;
        if (!cert.verdict) continue;
        ++hbi;
        for (double rr : {1.0, 10.0, 100.0}) {
            const SampledHbi t = hbi_check_sampled(P1, P2, rr, R);
            const double bound = cert.intersection_radius(rr);
            worst_ratio = std::max(worst_ratio, t.max_norm / bound);
            if (t.max_norm > bound * (1.0 + 1e-12)) ++bound_bad;
        }
    }
    SuiteReport rep{"hbi-agreement", {}};
    rep.checks.push_back(zero_count("exact vs sampled disagreements", disagree, instances,
                                    std::to_string(hbi) + " HBI, " + std::to_string(instances - hbi) +
                                        " not HBI; regenerated " + std::to_string(skipped) + " with gap < " +
                                        fmt(min_gap)));
    rep.checks.push_back(zero_count("C1 cap N_r(C2) within r/sin(gap), r in {1,10,100}", bound_bad, 3 * hbi,
                                    "worst max_norm/bound " + fmt(worst_ratio)));
    return rep;
}

SuiteReport separating_witness_suite(std::size_t pairs, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::vector<double> radii{1.0, 10.0, 100.0, 1000.0};
    constexpr double headroom = 0.5;
    std::size_t done = 0, bad_member = 0, bad_c1 = 0, bad_c2 = 0;
    while (done < pairs) {
        const SpanPair sp = random_span_pair(rng, 0.35);
        StructuredSet C1 = StructuredSet::subspaces(sp.d, sp.s1);
        StructuredSet C2 = StructuredSet::subspaces(sp.d, sp.s2);
        const SimResult sim = sim_decide(C1, C2);
        if (sim.value != Decision::no) continue;
        if (sim.uncovered_side == 2) std::swap(C1, C2);
        ++done;
        const auto probe = separating_witness(C1, C2, 0);
        const double delta = 1.0 / probe[0].norm();
        const int n_max = static_cast<int>(std::ceil(4.0 * (radii.back() + 2.0))) + 2;
        const auto Cp = separating_witness(C1, C2, n_max);
        for (std::size_t n = 0; n < Cp.size(); ++n) {
            const double dn = dist_to_set(Cp[n], C2);
            if (dist_to_set(Cp[n], C1) > 1e-9 * std::max(1.0, Cp[n].norm()) || !(dn > static_cast<double>(n))) {
                ++bad_member;
            }
        }
        for (double r : radii) {
            const double R = std::max(1000.0, 4.0 * (std::ceil(r) + 1.0) / delta);
            double m1 = 0.0, m2 = 0.0;
            for (const auto& p : Cp) {
                const double nrm = p.norm();
                if (nrm > R) continue;
                if (dist_to_set(p, C1) <= r) m1 = std::max(m1, nrm);
                if (dist_to_set(p, C2) <= r) m2 = std::max(m2, nrm);
            }
            if (m1 < headroom * R) ++bad_c1;
            if (!(m2 < headroom * R)) ++bad_c2;
        }
    }
    SuiteReport rep{"separating-witness", {}};
    rep.checks.push_back(zero_count("p_n in C1 with dist(p_n, C2) > n", bad_member, pairs));
    rep.checks.push_back(zero_count("(C1, C') not HBI at r in {1,10,100,1000}", bad_c1, pairs * radii.size()));
    rep.checks.push_back(zero_count("(C2, C') HBI at r in {1,10,100,1000}", bad_c2, pairs * radii.size()));
    return rep;
}

SuiteReport quotient_suite(std::size_t samples, std::size_t probes, std::size_t configs, std::uint64_t seed) {
    SuiteReport rep{"quotient", {}};
    const std::vector<std::pair<std::string, QuotientModel>> models{
        {"R^3 / O(3)", EuclideanOrth{3}}, {"P(2)", PosDefConj{2}}, {"P(3)", PosDefConj{3}}, {"P(4)", PosDefConj{4}}};
    std::uint64_t s = seed;
    for (const auto& [name, m] : models) {
        const NonexpandingReport ne = verify_nonexpanding_conditions(m, samples, ++s);
        rep.checks.push_back(at_most(name + ": condition (1) max violation", ne.max_condition1_violation, 1e-8,
                                     ne.samples));
        rep.checks.push_back(at_most(name + ": condition (2) max residual", ne.max_condition2_residual, 1e-8,
                                     ne.samples));

        std::mt19937_64 rng(++s);
        const int k = section_dim(m);
        auto coord = [&](double len) {
            if (std::holds_alternative<EuclideanOrth>(m)) return Vector::Constant(1, uniform(rng, -len, len)).eval();
            return sum_zero(k, uniform(rng, 0.0, len), rng);
        };
        std::vector<Vector> C, Cq;
        for (int i = 0; i < 5; ++i) {
            C.push_back(coord(4.0));
            Cq.push_back(section_canonical(m, coord(4.0)));
        }
        const LemmaReport lr = verify_lemma_neighborhoods(m, C, Cq, 1.0, probes, ++s);
        rep.checks.push_back(zero_count(name + ": neighborhood lemma counterexamples", lr.counterexamples, lr.probes,
                                        "worst discrepancy " + fmt(lr.worst_discrepancy)));
    }
    for (int n : {2, 3}) {
        const FourConditionResult fc = four_conditions(n, configs, ++s);
        rep.checks.push_back(zero_count("P(" + std::to_string(n) + "): four HBI conditions agree", fc.disagreements,
                                        fc.configs,
                                        std::to_string(fc.not_hbi) + " configurations not HBI; worst spread " +
                                            fmt(fc.worst_norm_spread)));
    }
    return rep;
}

SuiteReport theorem_suite(const TheoremSuiteConfig& cfg, const Tolerance& tol) {
    tol.validate();
    const int n = cfg.n;
    if (n < 2 || n > 3) throw ContractViolation("theorem_suite: n must be 2 or 3");
    if (!(cfg.r > 0.0)) throw ContractViolation("theorem_suite: r must be positive");
    std::mt19937_64 rng(cfg.seed);
    SuiteReport rep{"theorem", {}};

    const FourConditionResult fc = four_conditions(n, cfg.configs, cfg.seed + 1);
    rep.checks.push_back(zero_count("four HBI conditions agree", fc.disagreements, fc.configs,
                                    std::to_string(fc.not_hbi) + " configurations not HBI"));

    // H = {exp(jX) : |j| <= m}, a discrete piece of a one-parameter subgroup
    constexpr int m = 6;
    Matrix X = Matrix::Zero(n, n);
    {
        const Matrix Q = random_rotation(n, rng);
        const Vector a = sum_zero(n, 1.0, rng);
        X = Q * Matrix(a.asDiagonal()) * Q.transpose();
    }
    std::vector<Matrix> H;
    std::vector<Vector> SH;
    for (int j = -m; j <= m; ++j) {
        H.push_back(sym_exp(static_cast<double>(j) * X));
        SH.push_back(canonical_of(H.back()));
    }
    std::uniform_int_distribution<std::size_t> pickH(0, H.size() - 1);
    const double r = cfg.r;
    constexpr double slack = 1e-6;

    // K.H.D_r lands in the closed r-neighborhood of S^H(*)
    double worst_sup = -std::numeric_limits<double>::infinity();
    std::size_t bad_sup = 0;
    for (std::size_t s = 0; s < cfg.samples; ++s) {
        const Matrix g = random_rotation(n, rng) * H[pickH(rng)] * random_in_D(n, r, rng);
        const double d = dist_to_SH(canonical_of(g), SH, n);
        worst_sup = std::max(worst_sup, d - r);
        if (d > r + slack) ++bad_sup;
    }
    rep.checks.push_back(zero_count("K.H.D_r within N_r(S^H(*))", bad_sup, cfg.samples,
                                    "worst dist - r " + fmt(worst_sup)));

    // every g over N_r(S^H(*)) factors as k h d with d in D_r
    double worst_sub = -std::numeric_limits<double>::infinity();
    std::size_t bad_sub = 0;
    for (std::size_t s = 0; s < cfg.samples; ++s) {
        const std::size_t j = pickH(rng);
        const Vector y = SH[j] + sum_zero(n, uniform(rng) * r, rng);
        const Matrix Q = random_rotation(n, rng);
        const Matrix p = Q * Matrix(y.array().exp().matrix().asDiagonal()) * Q.transpose();
        const Matrix g = spd_sqrt(0.5 * (p + p.transpose()));
        const Vector c = canonical_of(g);
        std::size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < SH.size(); ++i) {
            const double d = dist_to_SH(c, {SH[i]}, n);
            if (d < bd) {
                bd = d;
                best = i;
            }
        }
        const SymEig ep = sym_eig(0.5 * (p + p.transpose()), tol);
        const Matrix hh = H[best] * H[best].transpose();
        SymEig eh = sym_eig(0.5 * (hh + hh.transpose()), tol);
        Matrix k = ep.Q * eh.Q.transpose();
        if (k.determinant() < 0) {
            eh.Q.col(n - 1) *= -1.0;
            k = ep.Q * eh.Q.transpose();
        }
        const Matrix d = H[best].inverse() * k.transpose() * g;
        const double dd = 2.0 * cartan_projection(d).norm();
        const double excess = std::max(dd - r, orthogonality_defect(k) - 1e-10);
        worst_sub = std::max(worst_sub, excess);
        if (dd > r + slack || orthogonality_defect(k) > 1e-10 || ((k * H[best] * d) - g).norm() > 1e-8 * g.norm()) {
            ++bad_sub;
        }
    }
    rep.checks.push_back(zero_count("N_r(S^H(*)) preimages factor as K.H.D_r", bad_sub, cfg.samples,
                                    "worst 2||mu(d)|| - r " + fmt(worst_sub)));

    // S^H(N_r(*)) within N_tau(S^H(*)); the hyperbolic-plane witness gives tau = r + 2b with b = 0
    double tau = 0.0;
    for (std::size_t s = 0; s < cfg.samples; ++s) {
        const Matrix g = random_in_D(n, r, rng);
        tau = std::max(tau, dist_to_SH(canonical_of(g * H[pickH(rng)]), SH, n));
    }
    rep.checks.push_back(at_most("S^H(N_r(*)) within N_tau(S^H(*))", tau, r + slack, cfg.samples,
                                 "empirical tau " + fmt(tau) + ", predicted r + 2b = " + fmt(r)));
    return rep;
}

SuiteReport cat0_suite(std::size_t checks, std::size_t rays, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SuiteReport rep{"cat0", {}};
    const std::vector<Cat0Model> models{
        Cat0Model::euclidean(3), Cat0Model::hyperbolic(), Cat0Model::posdef(2), Cat0Model::posdef(3),
        Cat0Model::product({Cat0Model::euclidean(2), Cat0Model::hyperbolic()})};
    for (const auto& m : models) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        std::size_t defects = 0;
        for (std::size_t s = 0; s < checks; ++s) {
            const Vector a = random_point(m, rng), b = random_point(m, rng), c = random_point(m, rng);
            try {
                const double margin = comparison_check(m, a, b, c, uniform(rng));
                lo = std::min(lo, margin);
                hi = std::max(hi, margin);
            } catch (const MetricDefect&) {
                ++defects;
            }
        }
        const std::string name = model_name(m);
        rep.checks.push_back(at_most(name + ": -(min comparison margin)", -lo, 1e-9, checks,
                                     "margin range [" + fmt(lo) + ", " + fmt(hi) + "]"));
        rep.checks.push_back(zero_count(name + ": metric defects", defects, checks));
        if (std::holds_alternative<EuclideanSpace>(m.kind)) {
            rep.checks.push_back(at_most(name + ": max comparison margin (flat equality)", hi, 1e-9, checks));
        }
    }
    const std::vector<Cat0Model> ray_models{Cat0Model::euclidean(3), Cat0Model::hyperbolic(),
                                            Cat0Model::product({Cat0Model::euclidean(2), Cat0Model::hyperbolic()})};
    for (const auto& m : ray_models) {
        double worst = -std::numeric_limits<double>::infinity(), worst_rise = 0.0;
        std::size_t bad = 0;
        for (std::size_t s = 0; s < rays; ++s) {
            const Vector p = random_point(m, rng), q = random_point(m, rng), p2 = random_point(m, rng);
            const GeodesicRay c = ray_through(m, p, q);
            const GeodesicRay c2 = asymptotic_ray(m, c, p2);
            const double d0 = dist(m, p, p2);
            double prev = std::numeric_limits<double>::infinity();
            bool ok = true;
            for (int t = 0; t <= 100; ++t) {
                const double sep = ray_separation(m, c, c2, t);
                worst = std::max(worst, sep - d0);
                if (sep > d0 + 1e-9) ok = false;
                if (sep > prev + 1e-9) ok = false;
                if (std::isfinite(prev)) worst_rise = std::max(worst_rise, sep - prev);
                prev = sep;
            }
            if (!ok) ++bad;
        }
        rep.checks.push_back(zero_count(model_name(m) + ": d(c(t), c'(t)) <= d(p, p') and non-increasing, t <= 100",
                                        bad, rays, "worst excess " + fmt(worst) + ", worst rise " + fmt(worst_rise)));
    }
    return rep;
}

SuiteReport property_s_suite(std::size_t triples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SuiteReport rep{"property-s", {}};
    const std::vector<Cat0Model> models{Cat0Model::hyperbolic(),
                                        Cat0Model::product({Cat0Model::euclidean(2), Cat0Model::hyperbolic()}),
                                        Cat0Model::euclidean(3)};
    for (const auto& m : models) {
        double w_fix = 0.0, w_disp = -std::numeric_limits<double>::infinity(), w_flat = 0.0;
        const bool flat = std::holds_alternative<EuclideanSpace>(m.kind);
        for (std::size_t s = 0; s < triples; ++s) {
            const Vector p0 = random_point(m, rng), p = random_point(m, rng), q = random_point(m, rng);
            const PropertySWitness w = property_s_witness(m, p0, p, q);
            const double fix = dist(m, apply_isometry(m, w.g, p), p0);
            const double disp = dist(m, q, apply_isometry(m, w.g, q));
            const double r = dist(m, p, p0);
            w_fix = std::max(w_fix, fix);
            w_disp = std::max(w_disp, disp - (r + 2.0 * w.b));
            if (flat) w_flat = std::max(w_flat, std::abs(disp - r));
        }
        const std::string name = model_name(m);
        rep.checks.push_back(at_most(name + ": d(g p, p0)", w_fix, 1e-9, triples));
        rep.checks.push_back(at_most(name + ": d(q, g q) - (r + 2b)", w_disp, 1e-6, triples));
        if (flat) rep.checks.push_back(at_most(name + ": |d(q, g q) - d(p, p0)|", w_flat, 1e-10, triples));
    }
    return rep;
}

SuiteReport section_suite(std::size_t points, double mesh, int max_n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SuiteReport rep{"section", {}};
    constexpr double near = 5e-3;
    constexpr double tolerance = 1e-2;
    for (int n = 2; n <= max_n; ++n) {
        std::size_t stray = 0, found = 0, samples = 0;
        double worst = 0.0;
        for (std::size_t s = 0; s < points; ++s) {
            const Vector x = sum_zero(n, uniform(rng, 0.2, 2.0), rng);
            const SectionCheck c = validate_orbit_section(PosDefConj{n}, x, mesh, near, tolerance, rng());
            stray += c.stray;
            found += c.near_section;
            samples += c.samples;
            worst = std::max(worst, c.worst_offset);
        }
        rep.checks.push_back(zero_count("P(" + std::to_string(n) + "): stray points of (K.p) cap Sigma", stray, points,
                                        std::to_string(samples) + " orbit samples, " + std::to_string(found) +
                                            " near the section, worst offset from W.p " + fmt(worst)));
    }
    return rep;
}

std::vector<std::pair<std::string, PropernessProblem>> sl2_goldens() {
    const AmbientGroup sl2(GroupKind::SL, 2);
    const Matrix X = one_param({1.0, -1.0});
    const Matrix R = rotation2(std::numbers::pi / 4.0);
    Matrix A(2, 2), B;
    A << 3.0, 0.0, 0.0, 1.0 / 3.0;
    B = R * A * R.transpose();
    const Discrete schottky{{A, B}};

    std::vector<std::pair<std::string, PropernessProblem>> out;
    auto add = [&](std::string name, SubgroupSpec h1, SubgroupSpec h2) {
        PropernessProblem p;
        p.ambient = sl2;
        p.h1 = std::move(h1);
        p.h2 = std::move(h2);
        out.emplace_back(std::move(name), std::move(p));
    };
    add("identical diagonal one-parameter subgroups", OneParameter{X}, OneParameter{X});
    add("diagonal one-parameter vs trivial group", OneParameter{X}, ElementList{{Matrix::Identity(2, 2)}});
    add("diagonal vs rotated diagonal one-parameter", OneParameter{X}, OneParameter{R * X * R.transpose()});
    add("Schottky group against itself", schottky, schottky);
    add("Schottky group vs {I, -I}", schottky, ElementList{{Matrix::Identity(2, 2), -Matrix::Identity(2, 2)}});
    return out;
}

SuiteReport golden_suite(std::uint64_t seed) {
    SuiteReport rep{"golden", {}};
    const AmbientGroup sl3(GroupKind::SL, 3);
    const AmbientGroup sl2(GroupKind::SL, 2);

    {
        PropernessProblem p;
        p.ambient = sl3;
        p.h1 = OneParameter{one_param({1.0, 1.0, -2.0})};
        p.h2 = OneParameter{one_param({1.0, -1.0, 0.0})};
        p.seed = seed;
        const Verdict v = decide(p);
        // independent oracle: smallest angle among the Weyl-orbit lines
        double gap = std::numbers::pi / 2.0;
        for (const auto& u : weyl_orbit((Vector(3) << 1.0, 1.0, -2.0).finished())) {
            for (const auto& w : weyl_orbit((Vector(3) << 1.0, -1.0, 0.0).finished())) {
                gap = std::min(gap, std::acos(std::min(1.0, std::abs(u.dot(w)) / (u.norm() * w.norm()))));
            }
        }
        const auto* pv = std::get_if<ProperVerdict>(&v);
        const double err = pv ? std::abs(pv->certificate.gap - gap) : 1.0;
        rep.checks.push_back(at_most("SL(3) diag(1,1,-2) vs diag(1,-1,0): Proper, gap matches orbit-line angle", err,
                                     1e-9, 1, std::string(verdict_kind(v)) + ", oracle gap " + fmt(gap)));
        const EquivalenceVerdict e = decide_equivalence(p);
        rep.checks.push_back(zero_count("SL(3) pair not equivalent", e.sim == Decision::no ? 0 : 1, 1));
    }
    {
        PropernessProblem p;
        p.ambient = sl2;
        p.h1 = OneParameter{one_param({1.0, -1.0})};
        p.h2 = p.h1;
        const Verdict v = decide(p);
        const auto* nv = std::get_if<NotProperVerdict>(&v);
        const Vector expect = (Vector(2) << 1.0, -1.0).finished() / std::sqrt(2.0);
        const double err = nv ? (nv->witness - expect).norm() : 1.0;
        rep.checks.push_back(at_most("identical one-parameter subgroups: NotProper, witness (1,-1)/sqrt2", err, 1e-9,
                                     1, verdict_kind(v)));
        rep.checks.push_back(zero_count("identical subgroups equivalent",
                                        decide_equivalence(p).sim == Decision::yes ? 0 : 1, 1));
        p.h2 = ElementList{{Matrix::Identity(2, 2)}};
        const Verdict c = decide(p);
        const auto* pc = std::get_if<ProperVerdict>(&c);
        rep.checks.push_back(zero_count("trivial H2: Proper with unbounded gap",
                                        (pc && std::isinf(pc->certificate.gap)) ? 0 : 1, 1, verdict_kind(c)));
        rep.checks.push_back(zero_count("trivial H2 not equivalent to a line",
                                        decide_equivalence(p).sim == Decision::no ? 0 : 1, 1));
    }
    {
        const CalabiMarkusReport cm = calabi_markus(sl2, OneParameter{one_param({1.0, -1.0})});
        const bool ok = !cm.admits_infinite_discontinuous && cm.statement.find("Calabi-Markus") != std::string::npos &&
                        cm.statement.find("only finite groups act properly discontinuously") != std::string::npos;
        rep.checks.push_back(zero_count("rank-equal Calabi-Markus statement", ok ? 0 : 1, 1, cm.statement));
        const CalabiMarkusReport cm3 = calabi_markus(sl3, OneParameter{one_param({1.0, 1.0, -2.0})});
        rep.checks.push_back(zero_count("SL(3) rank-one H admits infinite discontinuous groups",
                                        cm3.admits_infinite_discontinuous ? 0 : 1, 1, cm3.statement));
    }
    std::size_t bad = 0, undecided_layers = 0;
    std::string detail;
    const auto goldens = sl2_goldens();
    for (const auto& [name, p0] : goldens) {
        PropernessProblem p = p0;
        p.seed = seed;
        const CrossValidation cv = cross_validate(p);
        if (!cv.consistent) ++bad;
        if (cv.brute.bounded_away == Decision::undecided) ++undecided_layers;
        if (verdict_properness(cv.sampled) == Decision::undecided) ++undecided_layers;
        detail += name + ": " + cv.detail + "; ";
    }
    rep.checks.push_back(zero_count("cross-validation agrees on SL(2) goldens", bad, goldens.size(), detail));
    rep.checks.push_back(zero_count("empirical layers decided on SL(2) goldens", undecided_layers, 2 * goldens.size()));
    return rep;
}

std::vector<std::string> suite_names() {
    return {"kak",     "cartan-laws", "hbi-agreement", "separating-witness", "quotient",
            "theorem", "cat0",        "property-s",    "section",            "golden"};
}

SuiteReport run_suite(const std::string& name, std::size_t samples, std::uint64_t seed) {
    auto or_default = [&](std::size_t d) { return samples == 0 ? d : samples; };
    if (name == "kak") return kak_suite(or_default(1000), seed);
    if (name == "cartan-laws") return cartan_laws_suite(or_default(1000), seed);
    if (name == "hbi-agreement") return hbi_agreement_suite(or_default(200), seed);
    if (name == "separating-witness") return separating_witness_suite(or_default(50), seed);
    if (name == "quotient") return quotient_suite(or_default(1000), 500, 100, seed);
    if (name == "theorem") {
        TheoremSuiteConfig cfg;
        cfg.samples = or_default(1000);
        cfg.seed = seed;
        return theorem_suite(cfg);
    }
    if (name == "cat0") return cat0_suite(or_default(10'000), 500, seed);
    if (name == "property-s") return property_s_suite(or_default(500), seed);
    if (name == "section") return section_suite(or_default(100), 1e-2, 4, seed);
    if (name == "golden") return golden_suite(seed);
    throw ContractViolation("unknown suite '" + name + "'");
}

}  // namespace propcrit
