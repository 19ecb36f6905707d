#include "propcrit/io.hpp"

#include "propcrit/errors.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

namespace propcrit {
namespace {

std::string at(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

const Json& field(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object()) throw InputError(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw InputError(where, std::string("missing field '") + key + "'");
    return *it;
}

double number(const Json& j, const std::string& where) {
    if (!j.is_number()) throw InputError(where, "expected a number");
    return j.get<double>();
}

Json num_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

double num_or_inf(const Json& j) { return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>(); }

Json vec_to_json(const Vector& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Vector vec_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) throw InputError(where, "expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], at(where, i));
    return v;
}

std::vector<Matrix> matrices_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw InputError(where, "expected a non-empty array of matrices");
    std::vector<Matrix> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(matrix_from_json(j[i], at(where, i)));
    return out;
}

Json matrices_to_json(const std::vector<Matrix>& ms) {
    Json a = Json::array();
    for (const auto& m : ms) a.push_back(matrix_to_json(m));
    return a;
}

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

bool same_bits(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) return false;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (!same_bits(a[i], b[i])) return false;
    }
    return true;
}

const char* decision_name(Decision d) {
    switch (d) {
        case Decision::yes: return "true";
        case Decision::no: return "false";
        default: return "undecided";
    }
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw InputError(where, "expected a matrix (nested rows or flat row-major array)");
    if (j[0].is_array()) {
        const std::size_t n = j.size();
        Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(j[0].size()));
        for (std::size_t i = 0; i < n; ++i) {
            const std::string wi = at(where, i);
            if (!j[i].is_array()) throw InputError(wi, "expected a row array");
            if (j[i].size() != static_cast<std::size_t>(m.cols())) {
                throw InputError(wi, "row has " + std::to_string(j[i].size()) + " entries, expected " +
                                         std::to_string(m.cols()));
            }
            for (std::size_t k = 0; k < j[i].size(); ++k) {
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = number(j[i][k], at(wi, k));
            }
        }
        if (m.rows() != m.cols()) throw InputError(where, "matrix is not square");
        return m;
    }
    const std::size_t len = j.size();
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(len))));
    if (n * n != len) throw InputError(where, "flat array of " + std::to_string(len) + " entries is not square");
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < len; ++k) {
        m(static_cast<Eigen::Index>(k / n), static_cast<Eigen::Index>(k % n)) = number(j[k], at(where, k));
    }
    return m;
}

Matrix parse_matrix(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InputError("--matrix", std::string("not a JSON array: ") + e.what());
    }
    return matrix_from_json(j, "--matrix");
}

Json spec_to_json(const SubgroupSpec& s) {
    Json j;
    j["variant"] = variant_name(s);
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, OneParameter>) j["X"] = matrix_to_json(v.X);
            else if constexpr (std::is_same_v<T, ElementList>) j["elements"] = matrices_to_json(v.elements);
            else j["generators"] = matrices_to_json(v.generators);
        },
        s);
    return j;
}

SubgroupSpec spec_from_json(const Json& j, const std::string& where) {
    const Json& tag = field(j, "variant", where);
    if (!tag.is_string()) throw InputError(where + ".variant", "expected a string");
    const std::string v = tag.get<std::string>();
    if (v == "reductive_cartan") return ReductiveCartan{matrices_from_json(field(j, "generators", where), where + ".generators")};
    if (v == "discrete") return Discrete{matrices_from_json(field(j, "generators", where), where + ".generators")};
    if (v == "one_parameter") return OneParameter{matrix_from_json(field(j, "X", where), where + ".X")};
    if (v == "element_list") return ElementList{matrices_from_json(field(j, "elements", where), where + ".elements")};
    throw InputError(where + ".variant",
                     "unknown variant '" + v + "' (expected reductive_cartan, discrete, one_parameter, element_list)");
}

Json budgets_to_json(const Budgets& b) {
    return Json{{"word_length", b.word_length}, {"radius", b.radius},   {"rho", b.rho},
                {"mesh", b.mesh},               {"probe_radius", b.probe_radius},
                {"headroom", b.headroom},       {"samples", b.samples}};
}

Json tolerance_to_json(const Tolerance& t) {
    return Json{{"eps_orth", t.eps_orth}, {"eps_rank", t.eps_rank}, {"eps_geom", t.eps_geom}, {"eps_recon", t.eps_recon}};
}

Json problem_to_json(const PropernessProblem& p) {
    return Json{{"schema", kProblemSchema},
                {"ambient", {{"kind", p.ambient.kind() == GroupKind::SL ? "SL" : "GL"}, {"n", p.ambient.n()}}},
                {"h1", spec_to_json(p.h1)},
                {"h2", spec_to_json(p.h2)},
                {"mode", mode_name(p.mode)},
                {"budgets", budgets_to_json(p.budgets)},
                {"seed", p.seed}};
}

PropernessProblem problem_from_json(const Json& j, const Tolerance& tol) {
    if (!j.is_object()) throw InputError("$", "expected a JSON object");
    if (auto it = j.find("schema"); it != j.end() && *it != kProblemSchema) {
        throw InputError("$.schema", "unsupported schema (expected " + std::string(kProblemSchema) + ")");
    }
    const Json& amb = field(j, "ambient", "$");
    const Json& kind = field(amb, "kind", "$.ambient");
    if (!kind.is_string() || (kind != "SL" && kind != "GL")) throw InputError("$.ambient.kind", "expected \"SL\" or \"GL\"");
    const Json& n = field(amb, "n", "$.ambient");
    if (!n.is_number_integer()) throw InputError("$.ambient.n", "expected an integer");

    PropernessProblem p;
    try {
        p.ambient = AmbientGroup(kind == "SL" ? GroupKind::SL : GroupKind::GL, n.get<int>(), tol);
    } catch (const std::exception& e) {
        throw InputError("$.ambient", e.what());
    }
    p.h1 = spec_from_json(field(j, "h1", "$"), "$.h1");
    p.h2 = spec_from_json(field(j, "h2", "$"), "$.h2");
    if (auto it = j.find("mode"); it != j.end()) {
        if (!it->is_string()) throw InputError("$.mode", "expected a string");
        try {
            p.mode = parse_mode(it->get<std::string>());
        } catch (const std::exception& e) {
            throw InputError("$.mode", e.what());
        }
    }
    if (auto it = j.find("budgets"); it != j.end()) {
        if (!it->is_object()) throw InputError("$.budgets", "expected an object");
        auto num = [&](const char* key, double& out) {
            if (auto f = it->find(key); f != it->end()) out = number(*f, std::string("$.budgets.") + key);
        };
        auto integer = [&](const char* key, auto& out) {
            if (auto f = it->find(key); f != it->end()) {
                if (!f->is_number_integer()) throw InputError(std::string("$.budgets.") + key, "expected an integer");
                out = f->get<std::decay_t<decltype(out)>>();
            }
        };
        integer("word_length", p.budgets.word_length);
        num("radius", p.budgets.radius);
        num("rho", p.budgets.rho);
        num("mesh", p.budgets.mesh);
        num("probe_radius", p.budgets.probe_radius);
        num("headroom", p.budgets.headroom);
        integer("samples", p.budgets.samples);
        try {
            p.budgets.validate();
        } catch (const std::exception& e) {
            throw InputError("$.budgets", e.what());
        }
    }
    if (auto it = j.find("seed"); it != j.end()) {
        if (!it->is_number_unsigned()) throw InputError("$.seed", "expected a non-negative integer");
        p.seed = it->get<std::uint64_t>();
    }
    for (const auto& [key, spec] : {std::pair<const char*, const SubgroupSpec*>{"$.h1", &p.h1}, {"$.h2", &p.h2}}) {
        try {
            validate_spec(p.ambient, *spec, tol);
        } catch (const DomainError& e) {
            throw InputError(key, e.what());
        }
    }
    return p;
}

PropernessProblem load_problem(const std::string& path, const Tolerance& tol) {
    std::ifstream in(path);
    if (!in) throw InputError(path, "cannot open problem file");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError(path, std::string("invalid JSON: ") + e.what());
    }
    return problem_from_json(j, tol);
}

Json verdict_to_json(const Verdict& v) {
    Json j;
    j["kind"] = verdict_kind(v);
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, ProperVerdict>) {
                j["gap"] = num_or_null(x.certificate.gap);
                j["gap_exact"] = x.certificate.gap_exact;
                j["component1"] = x.certificate.component1;
                j["component2"] = x.certificate.component2;
                j["bounded_norm"] = x.bounded_norm ? Json(*x.bounded_norm) : Json(nullptr);
            } else if constexpr (std::is_same_v<T, NotProperVerdict>) {
                j["witness"] = vec_to_json(x.witness);
                j["component1"] = x.component1;
                j["component2"] = x.component2;
            } else if constexpr (std::is_same_v<T, EmpiricalProperVerdict>) {
                j["R"] = x.R;
                j["L"] = x.L;
                j["r"] = x.r;
                j["max_norm"] = x.max_norm;
            } else if constexpr (std::is_same_v<T, EmpiricalNotProperVerdict>) {
                j["R"] = x.R;
                j["L"] = x.L;
                j["r"] = x.r;
                j["max_norm"] = x.max_norm;
                j["witness"] = vec_to_json(x.witness);
            } else {
                j["reason"] = x.reason;
            }
        },
        v);
    return j;
}

Verdict verdict_from_json(const Json& j) {
    const std::string kind = field(j, "kind", "$.verdict").get<std::string>();
    const std::string w = "$.verdict";
    if (kind == "Proper") {
        ProperVerdict v;
        v.certificate.verdict = true;
        v.certificate.gap = num_or_inf(field(j, "gap", w));
        v.certificate.gap_exact = field(j, "gap_exact", w).get<bool>();
        v.certificate.component1 = field(j, "component1", w).get<std::size_t>();
        v.certificate.component2 = field(j, "component2", w).get<std::size_t>();
        if (const Json& b = field(j, "bounded_norm", w); !b.is_null()) v.bounded_norm = b.get<double>();
        return v;
    }
    if (kind == "NotProper") {
        return NotProperVerdict{vec_from_json(field(j, "witness", w), w + ".witness"),
                                field(j, "component1", w).get<std::size_t>(),
                                field(j, "component2", w).get<std::size_t>()};
    }
    if (kind == "EmpiricalProper") {
        return EmpiricalProperVerdict{field(j, "R", w).get<double>(), field(j, "L", w).get<int>(),
                                      field(j, "r", w).get<double>(), field(j, "max_norm", w).get<double>()};
    }
    if (kind == "EmpiricalNotProper") {
        return EmpiricalNotProperVerdict{field(j, "R", w).get<double>(), field(j, "L", w).get<int>(),
                                         field(j, "r", w).get<double>(), field(j, "max_norm", w).get<double>(),
                                         vec_from_json(field(j, "witness", w), w + ".witness")};
    }
    if (kind == "Undecided") return UndecidedVerdict{field(j, "reason", w).get<std::string>()};
    throw InputError(w + ".kind", "unknown verdict kind '" + kind + "'");
}

bool same_verdict(const Verdict& a, const Verdict& b) {
    if (a.index() != b.index()) return false;
    switch (a.index()) {
        case 0: {
            const auto& x = std::get<ProperVerdict>(a);
            const auto& y = std::get<ProperVerdict>(b);
            return same_bits(x.certificate.gap, y.certificate.gap) && x.certificate.gap_exact == y.certificate.gap_exact &&
                   x.certificate.component1 == y.certificate.component1 &&
                   x.certificate.component2 == y.certificate.component2 &&
                   x.bounded_norm.has_value() == y.bounded_norm.has_value() &&
                   (!x.bounded_norm || same_bits(*x.bounded_norm, *y.bounded_norm));
        }
        case 1: {
            const auto& x = std::get<NotProperVerdict>(a);
            const auto& y = std::get<NotProperVerdict>(b);
            return same_bits(x.witness, y.witness) && x.component1 == y.component1 && x.component2 == y.component2;
        }
        case 2: {
            const auto& x = std::get<EmpiricalProperVerdict>(a);
            const auto& y = std::get<EmpiricalProperVerdict>(b);
            return same_bits(x.R, y.R) && x.L == y.L && same_bits(x.r, y.r) && same_bits(x.max_norm, y.max_norm);
        }
        case 3: {
            const auto& x = std::get<EmpiricalNotProperVerdict>(a);
            const auto& y = std::get<EmpiricalNotProperVerdict>(b);
            return same_bits(x.R, y.R) && x.L == y.L && same_bits(x.r, y.r) && same_bits(x.max_norm, y.max_norm) &&
                   same_bits(x.witness, y.witness);
        }
        default: return std::get<UndecidedVerdict>(a).reason == std::get<UndecidedVerdict>(b).reason;
    }
}

Json equivalence_to_json(const EquivalenceVerdict& e) {
    return Json{{"sim", decision_name(e.sim)},
                {"basis", e.basis},
                {"sampled_hausdorff", e.sampled_hausdorff ? Json(*e.sampled_hausdorff) : Json(nullptr)}};
}

Json suite_to_json(const SuiteReport& s) {
    Json checks = Json::array();
    for (const auto& c : s.checks) {
        checks.push_back(Json{{"name", c.name},
                              {"pass", c.pass},
                              {"worst", num_or_null(c.worst)},
                              {"threshold", c.threshold},
                              {"count", c.count},
                              {"detail", c.detail}});
    }
    return Json{{"suite", s.suite}, {"pass", s.pass()}, {"checks", checks}};
}

Json cross_validation_to_json(const CrossValidation& cv) {
    const auto& b = cv.brute;
    return Json{{"exact", cv.exact ? verdict_to_json(*cv.exact) : Json(nullptr)},
                {"sampled", verdict_to_json(cv.sampled)},
                {"brute_force",
                 {{"h1_count", b.h1_count},
                  {"h2_count", b.h2_count},
                  {"net_size", b.net_size},
                  {"captured", b.captured},
                  {"max_captured_norm", b.max_captured_norm},
                  {"frontier", b.frontier},
                  {"bounded_away", decision_name(b.bounded_away)}}},
                {"consistent", cv.consistent},
                {"detail", cv.detail}};
}

int verdict_exit_code(const Verdict& v) {
    switch (verdict_properness(v)) {
        case Decision::yes: return 0;
        case Decision::no: return 1;
        default: return 2;
    }
}

Json report_json(const std::string& command, const Tolerance& tol, std::uint64_t seed) {
    return Json{{"schema", kReportSchema},
                {"tool_version", kToolVersion},
                {"command", command},
                {"tolerance", tolerance_to_json(tol)},
                {"seed", seed}};
}

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace propcrit
