// propcrit: properness decisions and verification sweeps from the command line.
//
// Exit status: 0 verdict produced / checks passed, 1 NotProper or false,
// 2 undecided or budget exhausted, 3 input error, 4 consistency failure.

#include "propcrit/errors.hpp"
#include "propcrit/io.hpp"
#include "propcrit/suites.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace propcrit;

namespace {

enum Exit { kOk = 0, kFalse = 1, kUndecided = 2, kInput = 3, kInconsistent = 4 };

struct Options {
    std::string problem;
    std::string report;
    std::string mode;
    int word_length = 4;
    double radius = 1000.0;
    double rho = 1.0;
    double mesh = 0.2;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    double eps_geom = Tolerance{}.eps_geom;
    std::vector<std::string> matrices;
    std::string file;
    int precision = 4;
    std::vector<std::string> suites;

    CLI::Option* o_mode = nullptr;
    CLI::Option* o_word = nullptr;
    CLI::Option* o_radius = nullptr;
    CLI::Option* o_rho = nullptr;
    CLI::Option* o_mesh = nullptr;
    CLI::Option* o_samples = nullptr;
    CLI::Option* o_seed = nullptr;

    Tolerance tolerance() const {
        Tolerance t;
        t.eps_geom = eps_geom;
        t.validate();
        return t;
    }
};

void add_common(CLI::App* sub, Options& o, bool needs_problem) {
    if (needs_problem) sub->add_option("--problem", o.problem, "Problem file (JSON)")->required();
    sub->add_option("--report", o.report, "Write the JSON report to this path");
    o.o_mode = sub->add_option("--mode", o.mode, "exact | sampled | auto");
    o.o_word = sub->add_option("--word-length", o.word_length, "Word length L for discrete subgroups");
    o.o_radius = sub->add_option("--radius", o.radius, "Exploration radius R");
    o.o_rho = sub->add_option("--rho", o.rho, "Radius of the compact thickening D_rho");
    o.o_mesh = sub->add_option("--mesh", o.mesh, "Net mesh");
    o.o_samples = sub->add_option("--samples", o.samples, "Sample count");
    o.o_seed = sub->add_option("--seed", o.seed, "Seed for randomized sweeps");
    sub->add_option("--tolerance", o.eps_geom, "Geometric tolerance eps_geom");
}

/// The problem file with command-line overrides applied.
PropernessProblem load(const Options& o, const Tolerance& tol) {
    PropernessProblem p = load_problem(o.problem, tol);
    if (o.o_mode && o.o_mode->count()) p.mode = parse_mode(o.mode);
    if (o.o_word->count()) p.budgets.word_length = o.word_length;
    if (o.o_radius->count()) p.budgets.radius = o.radius;
    if (o.o_rho->count()) p.budgets.rho = o.rho;
    if (o.o_mesh->count()) p.budgets.mesh = o.mesh;
    if (o.o_samples->count()) p.budgets.samples = o.samples;
    if (o.o_seed->count()) p.seed = o.seed;
    try {
        p.budgets.validate();
    } catch (const ContractViolation& e) {
        throw InputError("flags", e.what());
    }
    return p;
}

void emit(const Options& o, Json report) {
    report["timestamp"] = utc_timestamp();
    if (o.report.empty()) return;
    std::ofstream out(o.report);
    if (!out) throw InputError(o.report, "cannot write report");
    out << report.dump(2) << '\n';
}

std::string describe(const Verdict& v) {
    std::ostringstream os;
    os << verdict_kind(v);
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, ProperVerdict>) {
                os << " (gap " << x.certificate.gap << (x.certificate.gap_exact ? "" : ", lower bound") << ")";
            } else if constexpr (std::is_same_v<T, NotProperVerdict>) {
                os << " (witness " << x.witness.transpose() << ", components " << x.component1 << "/"
                   << x.component2 << ")";
            } else if constexpr (std::is_same_v<T, EmpiricalProperVerdict>) {
                os << " up to R = " << x.R << ", L = " << x.L << " (max matched norm " << x.max_norm << ")";
            } else if constexpr (std::is_same_v<T, EmpiricalNotProperVerdict>) {
                os << " up to R = " << x.R << ", L = " << x.L << " (witness " << x.witness.transpose() << ")";
            } else {
                os << ": " << x.reason;
            }
        },
        v);
    return os.str();
}

int run_decide(const Options& o) {
    const Tolerance tol = o.tolerance();
    const PropernessProblem p = load(o, tol);
    const Verdict v = decide(p, tol);
    Json r = report_json("decide", tol, p.seed);
    r["problem"] = problem_to_json(p);
    r["budgets"] = budgets_to_json(p.budgets);
    r["mode"] = mode_name(effective_mode(p));
    r["verdict"] = verdict_to_json(v);
    emit(o, r);
    std::cout << describe(v) << '\n';
    return verdict_exit_code(v);
}

int run_equiv(const Options& o) {
    const Tolerance tol = o.tolerance();
    const PropernessProblem p = load(o, tol);
    const EquivalenceVerdict e = decide_equivalence(p, tol);
    Json r = report_json("equiv", tol, p.seed);
    r["problem"] = problem_to_json(p);
    r["budgets"] = budgets_to_json(p.budgets);
    r["equivalence"] = equivalence_to_json(e);
    emit(o, r);
    std::cout << "H1 ~ H2: " << r["equivalence"]["sim"].get<std::string>() << " (" << e.basis << ")\n";
    return e.sim == Decision::yes ? kOk : e.sim == Decision::no ? kFalse : kUndecided;
}

int run_cross_validate(const Options& o) {
    const Tolerance tol = o.tolerance();
    const PropernessProblem p = load(o, tol);
    const CrossValidation cv = cross_validate(p, tol);
    Json r = report_json("cross-validate", tol, p.seed);
    r["problem"] = problem_to_json(p);
    r["budgets"] = budgets_to_json(p.budgets);
    r["cross_validation"] = cross_validation_to_json(cv);
    r["verdict"] = verdict_to_json(cv.exact ? *cv.exact : cv.sampled);
    emit(o, r);
    std::cout << cv.detail << '\n';
    if (!cv.consistent) return kInconsistent;
    return verdict_exit_code(cv.exact ? *cv.exact : cv.sampled);
}

int run_project(const Options& o) {
    const Tolerance tol = o.tolerance();
    std::vector<std::pair<std::string, Matrix>> gs;
    for (std::size_t i = 0; i < o.matrices.size(); ++i) {
        gs.emplace_back("--matrix[" + std::to_string(i) + "]", parse_matrix(o.matrices[i]));
    }
    if (!o.file.empty()) {
        std::ifstream in(o.file);
        if (!in) throw InputError(o.file, "cannot open matrix file");
        Json j;
        try {
            j = Json::parse(in);
        } catch (const Json::parse_error& e) {
            throw InputError(o.file, std::string("invalid JSON: ") + e.what());
        }
        const bool single = j.is_array() && !j.empty() && j[0].is_array() && !j[0].empty() && j[0][0].is_number();
        const bool flat = j.is_array() && !j.empty() && j[0].is_number();
        if (single || flat) {
            gs.emplace_back(o.file, matrix_from_json(j, "$"));
        } else {
            if (!j.is_array()) throw InputError(o.file, "expected a matrix or an array of matrices");
            for (std::size_t i = 0; i < j.size(); ++i) {
                const std::string where = "$[" + std::to_string(i) + "]";
                gs.emplace_back(o.file + ":" + where, matrix_from_json(j[i], where));
            }
        }
    }
    if (gs.empty()) throw InputError("project", "give --matrix or --file");
    Json r = report_json("project", tol, o.seed);
    Json rows = Json::array();
    for (const auto& [where, g] : gs) {
        Vector mu;
        try {
            mu = cartan_projection(g, tol);
        } catch (const DomainError& e) {
            throw InputError(where, e.what());
        }
        std::ostringstream os;
        os.setf(std::ios::fixed);
        os.precision(o.precision);
        os << "(";
        for (Eigen::Index i = 0; i < mu.size(); ++i) {
            // avoid printing -0.0000
            const double x = std::abs(mu[i]) < 0.5 * std::pow(10.0, -o.precision) ? 0.0 : mu[i];
            os << (i ? ", " : "") << x;
        }
        os << ")";
        std::cout << os.str() << '\n';
        Json row = Json::array();
        for (Eigen::Index i = 0; i < mu.size(); ++i) row.push_back(mu[i]);
        rows.push_back(row);
    }
    r["projections"] = rows;
    emit(o, r);
    return kOk;
}

int run_rank(const Options& o) {
    const Tolerance tol = o.tolerance();
    const PropernessProblem p = load(o, tol);
    Json r = report_json("rank", tol, p.seed);
    Json out = Json::array();
    for (const auto& [name, spec] : {std::pair<const char*, const SubgroupSpec*>{"h1", &p.h1}, {"h2", &p.h2}}) {
        if (!is_reductive(*spec)) continue;
        const CalabiMarkusReport cm = calabi_markus(p.ambient, *spec, tol);
        out.push_back(Json{{"subgroup", name},
                           {"ambient_rank", cm.ambient_rank},
                           {"subgroup_rank", cm.subgroup_rank},
                           {"admits_infinite_discontinuous", cm.admits_infinite_discontinuous},
                           {"statement", cm.statement}});
        std::cout << name << ": " << cm.statement << '\n';
    }
    if (out.empty()) throw InputError("$.h1", "rank needs a reductive spec (reductive_cartan or one_parameter)");
    r["calabi_markus"] = out;
    emit(o, r);
    return kOk;
}

int run_suites(const Options& o, const std::string& command, const std::vector<SuiteReport>& reports) {
    const Tolerance tol = o.tolerance();
    Json r = report_json(command, tol, o.seed);
    Json arr = Json::array();
    bool pass = true;
    for (const auto& s : reports) {
        arr.push_back(suite_to_json(s));
        pass = pass && s.pass();
        for (const auto& c : s.checks) {
            std::cout << (c.pass ? "PASS " : "FAIL ") << s.suite << ": " << c.name << " (worst " << c.worst
                      << ", threshold " << c.threshold << ", n = " << c.count << ")";
            if (!c.detail.empty()) std::cout << " " << c.detail;
            std::cout << '\n';
        }
    }
    r["suites"] = arr;
    emit(o, r);
    return pass ? kOk : kInconsistent;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Properness of subgroup pairs via Cartan projections and HBI verdicts"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    auto* decide_cmd = app.add_subcommand("decide", "Decide properness of the pair (H1, H2)");
    auto* equiv_cmd = app.add_subcommand("equiv", "Decide H1 ~ H2 (coarse equivalence)");
    auto* cross_cmd = app.add_subcommand("cross-validate", "Exact, sampled and brute-force layers side by side");
    auto* rank_cmd = app.add_subcommand("rank", "Calabi-Markus rank comparison");
    auto* project_cmd = app.add_subcommand("project", "Print Cartan projections mu(g)");
    auto* cat0_cmd = app.add_subcommand("cat0-verify", "Comparison-triangle and asymptotic-ray sweeps");
    auto* props_cmd = app.add_subcommand("property-s", "Property (S) witness sweeps");
    auto* quot_cmd = app.add_subcommand("quotient-verify", "Quotient conditions, lemma and section sweeps");
    auto* suite_cmd = app.add_subcommand("suite", "Run named verification suites (default: all)");

    std::vector<Options> per(9);
    CLI::App* cmds[] = {decide_cmd, equiv_cmd, cross_cmd, rank_cmd, project_cmd, cat0_cmd, props_cmd, quot_cmd, suite_cmd};
    for (std::size_t i = 0; i < 9; ++i) add_common(cmds[i], per[i], i < 4);
    project_cmd->add_option("--matrix", per[4].matrices, "Matrix as JSON rows, e.g. \"[[1,1],[0,1]]\"")
        ->allow_extra_args(false);
    project_cmd->add_option("--file", per[4].file, "JSON file with a matrix or an array of matrices");
    project_cmd->add_option("--precision", per[4].precision, "Decimals printed")->check(CLI::Range(0, 17));
    suite_cmd->add_option("--name", per[8].suites, "Suite name (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInput;
    }

    try {
        if (*decide_cmd) return run_decide(per[0]);
        if (*equiv_cmd) return run_equiv(per[1]);
        if (*cross_cmd) return run_cross_validate(per[2]);
        if (*rank_cmd) return run_rank(per[3]);
        if (*project_cmd) return run_project(per[4]);
        if (*cat0_cmd) {
            const Options& x = per[5];
            return run_suites(x, "cat0-verify", {cat0_suite(x.samples ? x.samples : 10'000, 500, x.seed)});
        }
        if (*props_cmd) {
            const Options& x = per[6];
            return run_suites(x, "property-s", {property_s_suite(x.samples ? x.samples : 500, x.seed)});
        }
        if (*quot_cmd) {
            const Options& x = per[7];
            const double mesh = x.o_mesh->count() ? x.mesh : 1e-2;
            return run_suites(x, "quotient-verify",
                              {quotient_suite(x.samples ? x.samples : 1000, 500, 100, x.seed),
                               section_suite(100, mesh, 4, x.seed)});
        }
        if (*suite_cmd) {
            const Options& x = per[8];
            std::vector<std::string> names = x.suites.empty() ? suite_names() : x.suites;
            std::vector<SuiteReport> reports;
            for (const auto& n : names) reports.push_back(run_suite(n, x.samples, x.seed));
            return run_suites(x, "suite", reports);
        }
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInput;
    } catch (const ModeError& e) {
        std::cerr << "mode error: " << e.what() << '\n';
        return kInput;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return kUndecided;
    } catch (const ContractViolation& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInput;
    } catch (const DomainError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInput;
    } catch (const Unsupported& e) {
        std::cerr << "unsupported: " << e.what() << '\n';
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "internal failure: " << e.what() << '\n';
        return kInconsistent;
    }
    return kInput;
}
