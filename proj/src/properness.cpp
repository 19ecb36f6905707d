#include "propcrit/properness.hpp"

#include "propcrit/errors.hpp"
#include "propcrit/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace propcrit {
namespace {

double max_norm(const StructuredSet& C) {
    double m = 0.0;
    if (const auto* cloud = std::get_if<PointCloud>(&C.data)) {
        for (const auto& p : cloud->points) m = std::max(m, p.norm());
    }
    return m;
}

bool has_discrete(const PropernessProblem& p) {
    return std::holds_alternative<Discrete>(p.h1) || std::holds_alternative<Discrete>(p.h2);
}

bool has_finite_list(const PropernessProblem& p) { return is_finite_list(p.h1) || is_finite_list(p.h2); }

Verdict decide_exact(const PropernessProblem& p, const Tolerance& tol) {
    if (has_finite_list(p)) {
        // a finite subgroup is compact, so the pair is proper whatever the other side is
        const SubgroupSpec& compact = is_finite_list(p.h1) ? p.h1 : p.h2;
        const StructuredSet A = a_of_subgroup(p.ambient, compact, 0, tol);
        ProperVerdict v;
        v.certificate.verdict = true;
        v.certificate.gap = std::numeric_limits<double>::infinity();
        v.bounded_norm = max_norm(A);
        return v;
    }
    if (has_discrete(p)) throw ModeError("exact mode needs reductive or finite specs; a discrete spec was given");
    const StructuredSet A1 = a_of_subgroup(p.ambient, p.h1, p.budgets.word_length, tol);
    const StructuredSet A2 = a_of_subgroup(p.ambient, p.h2, p.budgets.word_length, tol);
    if (A1.is_bounded() || A2.is_bounded()) {
        ProperVerdict v;
        v.certificate.verdict = true;
        v.certificate.gap = std::numeric_limits<double>::infinity();
        v.bounded_norm = 0.0;
        return v;
    }
    const HbiCertificate cert = hbi_decide(A1, A2, tol);
    if (cert.verdict) return ProperVerdict{cert, std::nullopt};
    NotProperVerdict v;
    v.witness = *cert.witness;
    v.component1 = cert.component1;
    v.component2 = cert.component2;
    return v;
}

Verdict decide_sampled(const PropernessProblem& p, const Tolerance& tol) {
    const Budgets& b = p.budgets;
    const StructuredSet A1 = a_of_subgroup(p.ambient, p.h1, b.word_length, tol);
    const StructuredSet A2 = a_of_subgroup(p.ambient, p.h2, b.word_length, tol);

    double R = b.radius;
    bool any_discrete = false;
    double reach = 0.0;
    for (const auto* A : {&A1, &A2}) {
        if (A->is_empirical()) {
            any_discrete = true;
            reach = std::max(reach, max_norm(*A));
        }
    }
    if (any_discrete) R = std::min(R, reach);
    constexpr int kDirections = 1024;
    const double r = std::max(b.probe_radius, 2.0 * std::numbers::pi * R / kDirections);
    if (any_discrete) {
        for (const auto* A : {&A1, &A2}) {
            if (A->is_empirical() && max_norm(*A) <= r) {
                return UndecidedVerdict{"word ball of length " + std::to_string(b.word_length) +
                                        " stays inside the probe radius; increase the word length"};
            }
        }
    }

    SamplingPlan plan;
    plan.radius = R + r;
    plan.radial_step = r;
    plan.radial_ratio = 1.1;
    plan.directions = kDirections;
    plan.seed = p.seed;
    auto cloud = [&](const StructuredSet& A) {
        if (A.is_cloud()) {
            std::vector<Vector> pts;
            for (const auto& q : std::get<PointCloud>(A.data).points) {
                if (q.norm() <= R + r) pts.push_back(q);
            }
            return pts;
        }
        return sample_set(A, plan);
    };
    const std::vector<Vector> P1 = cloud(A1);
    const std::vector<Vector> P2 = cloud(A2);
    if (P1.empty() || P2.empty()) return UndecidedVerdict{"empty sample"};

    const SampledHbi s = hbi_check_sampled(P1, P2, r, R, b.headroom);
    if (s.empirically_hbi) return EmpiricalProperVerdict{R, b.word_length, r, s.max_norm};
    return EmpiricalNotProperVerdict{R, b.word_length, r, s.max_norm, *s.offending};
}

}  // namespace

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::exact: return "exact";
        case Mode::sampled: return "sampled";
        default: return "auto";
    }
}

Mode parse_mode(const std::string& s) {
    if (s == "exact") return Mode::exact;
    if (s == "sampled") return Mode::sampled;
    if (s == "auto") return Mode::automatic;
    throw ContractViolation("unknown mode '" + s + "' (expected exact, sampled or auto)");
}

void Budgets::validate() const {
    if (word_length < 0) throw ContractViolation("budgets: word_length must be >= 0");
    if (!(radius > 0.0)) throw ContractViolation("budgets: radius must be positive");
    if (!(rho >= 0.0)) throw ContractViolation("budgets: rho must be nonnegative");
    if (!(mesh > 0.0)) throw ContractViolation("budgets: mesh must be positive");
    if (!(probe_radius > 0.0)) throw ContractViolation("budgets: probe radius must be positive");
    if (!(headroom > 0.0 && headroom <= 1.0)) throw ContractViolation("budgets: headroom must be in (0, 1]");
    if (samples < 1) throw ContractViolation("budgets: samples must be >= 1");
}

void PropernessProblem::validate(const Tolerance& tol) const {
    tol.validate();
    budgets.validate();
    validate_spec(ambient, h1, tol);
    validate_spec(ambient, h2, tol);
}

const char* verdict_kind(const Verdict& v) {
    switch (v.index()) {
        case 0: return "Proper";
        case 1: return "NotProper";
        case 2: return "EmpiricalProper";
        case 3: return "EmpiricalNotProper";
        default: return "Undecided";
    }
}

Decision verdict_properness(const Verdict& v) {
    switch (v.index()) {
        case 0:
        case 2: return Decision::yes;
        case 1:
        case 3: return Decision::no;
        default: return Decision::undecided;
    }
}

Mode effective_mode(const PropernessProblem& p) {
    if (p.mode != Mode::automatic) return p.mode;
    return (!has_discrete(p) || has_finite_list(p)) ? Mode::exact : Mode::sampled;
}

Verdict decide(const PropernessProblem& p, const Tolerance& tol) {
    p.validate(tol);
    if (effective_mode(p) == Mode::exact) return decide_exact(p, tol);
    return decide_sampled(p, tol);
}

EquivalenceVerdict decide_equivalence(const PropernessProblem& p, const Tolerance& tol) {
    p.validate(tol);
    if (has_discrete(p)) throw ModeError("equivalence needs reductive or finite specs; a discrete spec was given");
    EquivalenceVerdict out;
    out.basis = "cartan images coarsely equivalent in a (settles H1 ~ H2 in G, the images in K\\M, "
                "and equality of the HBI partner classes)";
    const StructuredSet A1 = a_of_subgroup(p.ambient, p.h1, p.budgets.word_length, tol);
    const StructuredSet A2 = a_of_subgroup(p.ambient, p.h2, p.budgets.word_length, tol);
    const bool b1 = A1.is_bounded();
    const bool b2 = A2.is_bounded();
    if (b1 || b2) {
        out.sim = (b1 && b2) ? Decision::yes : Decision::no;
        return out;
    }
    const SimResult s = sim_decide(A1, A2, tol);
    out.sim = s.value;
    out.sampled_hausdorff = s.sampled_hausdorff;
    return out;
}

CalabiMarkusReport calabi_markus(const AmbientGroup& G, const SubgroupSpec& H, const Tolerance& tol) {
    if (!is_reductive(H)) throw Unsupported("calabi_markus: needs a reductive spec (Cartan generators or one-parameter)");
    validate_spec(G, H, tol);
    CalabiMarkusReport rep;
    rep.ambient_rank = G.real_rank();
    rep.subgroup_rank = real_rank(H, tol);
    rep.admits_infinite_discontinuous = rep.ambient_rank > rep.subgroup_rank;
    std::ostringstream os;
    os << "rank " << G.name() << " = " << rep.ambient_rank << ", rank H = " << rep.subgroup_rank << ": ";
    if (rep.admits_infinite_discontinuous) {
        os << "G/H admits an infinite discontinuous group";
    } else {
        os << "ranks are equal, so only finite groups act properly discontinuously on G/H "
              "(Calabi-Markus phenomenon)";
    }
    rep.statement = os.str();
    return rep;
}

std::vector<Matrix> enumerate_elements(const AmbientGroup& G, const SubgroupSpec& spec, int L,
                                       std::size_t max_elements) {
    const int n = G.n();
    if (const auto* d = std::get_if<Discrete>(&spec)) return word_ball(d->generators, L, max_elements);
    if (const auto* e = std::get_if<ElementList>(&spec)) {
        if (e->elements.size() > max_elements) throw BudgetExceeded("element list exceeds budget", e->elements.size());
        return e->elements;
    }
    std::vector<Matrix> gens;
    if (const auto* o = std::get_if<OneParameter>(&spec)) gens = {o->X};
    else gens = std::get<ReductiveCartan>(spec).generators;
    const std::size_t side = static_cast<std::size_t>(2 * L + 1);
    std::size_t total = 1;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        total *= side;
        if (total > max_elements) throw BudgetExceeded("lattice of Cartan generators exceeds budget", total);
    }
    std::vector<Matrix> out;
    std::vector<int> k(gens.size(), -L);
    while (true) {
        Matrix X = Matrix::Zero(n, n);
        for (std::size_t i = 0; i < gens.size(); ++i) X += static_cast<double>(k[i]) * gens[i];
        out.push_back(sym_exp(0.5 * (X + X.transpose())));
        std::size_t i = 0;
        while (i < k.size() && ++k[i] > L) {
            k[i] = -L;
            ++i;
        }
        if (i == k.size()) break;
    }
    return out;
}

BruteForceReport brute_force_properness(const PropernessProblem& p, const CompactNetD& net, const Tolerance& tol) {
    p.validate(tol);
    if (p.ambient.n() > 3) throw ContractViolation("brute_force_properness: N <= 3 only");
    const auto H1 = enumerate_elements(p.ambient, p.h1, p.budgets.word_length);
    const auto H2 = enumerate_elements(p.ambient, p.h2, p.budgets.word_length);
    std::vector<Matrix> H2inv;
    H2inv.reserve(H2.size());
    for (const auto& h : H2) H2inv.push_back(h.inverse());
    const auto mu1 = kernels::cartan_projection_batch_parallel(H1);
    const auto mu2 = kernels::cartan_projection_batch_parallel(H2);

    kernels::CaptureInput in{H1, mu1, H2inv, mu2, net.elements, 0.0, 0.0};
    in.bound = net.rho / 2.0 + net.mesh;
    in.prefilter = net.rho + 2.0 * net.mesh + 1e-9;
    const auto captured = kernels::capture_scan_parallel(in);

    BruteForceReport rep;
    rep.h1_count = H1.size();
    rep.h2_count = H2.size();
    rep.net_size = net.elements.size();
    for (std::size_t i = 0; i < H1.size(); ++i) {
        const double nm = mu1[i].norm();
        rep.frontier = std::max(rep.frontier, nm);
        if (captured[i]) {
            ++rep.captured;
            rep.max_captured_norm = std::max(rep.max_captured_norm, nm);
        }
    }
    if (rep.frontier <= in.bound) {
        rep.bounded_away = Decision::undecided;
    } else {
        rep.bounded_away = rep.max_captured_norm < p.budgets.headroom * rep.frontier ? Decision::yes : Decision::no;
    }
    return rep;
}

CrossValidation cross_validate(const PropernessProblem& p, const Tolerance& tol) {
    p.validate(tol);
    if (p.ambient.n() > 3) throw ContractViolation("cross_validate: N <= 3 only");
    CrossValidation cv;
    if (!has_discrete(p) || has_finite_list(p)) {
        PropernessProblem q = p;
        q.mode = Mode::exact;
        cv.exact = decide(q, tol);
    }
    {
        PropernessProblem q = p;
        q.mode = Mode::sampled;
        cv.sampled = decide(q, tol);
    }
    const CompactNetD net = group_ball_net(p.ambient, p.budgets.rho, p.budgets.mesh, 10'000);
    cv.brute = brute_force_properness(p, net, tol);

    std::vector<std::pair<std::string, Decision>> layers;
    if (cv.exact) layers.emplace_back("exact", verdict_properness(*cv.exact));
    layers.emplace_back("sampled", verdict_properness(cv.sampled));
    layers.emplace_back("brute-force", cv.brute.bounded_away);
    std::optional<Decision> ref;
    std::ostringstream os;
    cv.consistent = true;
    for (const auto& [name, d] : layers) {
        os << name << "=" << (d == Decision::yes ? "proper" : d == Decision::no ? "not-proper" : "undecided") << " ";
        if (d == Decision::undecided) continue;
        if (!ref) ref = d;
        else if (*ref != d) cv.consistent = false;
    }
    os << (cv.consistent ? "(consistent)" : "(DISAGREEMENT)");
    cv.detail = os.str();
    return cv;
}

bool SuiteReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.pass; });
}

}  // namespace propcrit
