#include "doctest.h"

#include "propcrit/io.hpp"
#include "propcrit/suites.hpp"

#include <string>

using namespace propcrit;

namespace {

Json sl3_problem() {
    return Json::parse(R"({
        "schema": "propcrit.problem/1",
        "ambient": {"kind": "SL", "n": 3},
        "h1": {"variant": "one_parameter", "X": [[1,0,0],[0,1,0],[0,0,-2]]},
        "h2": {"variant": "one_parameter", "X": [1,0,0, 0,-1,0, 0,0,0]},
        "budgets": {"radius": 500},
        "seed": 7
    })");
}

std::string error_location(const Json& j) {
    try {
        problem_from_json(j);
    } catch (const InputError& e) {
        return e.location();
    }
    return "";
}

}  // namespace

TEST_CASE("problem parsing and round trip") {
    const PropernessProblem p = problem_from_json(sl3_problem());
    CHECK(p.ambient.n() == 3);
    CHECK(p.seed == 7);
    CHECK(p.budgets.radius == 500.0);
    CHECK(p.mode == Mode::automatic);
    const PropernessProblem q = problem_from_json(problem_to_json(p));
    CHECK(problem_to_json(q) == problem_to_json(p));
    CHECK(same_verdict(decide(p), decide(q)));
}

TEST_CASE("malformed problems report their location") {
    Json j = sl3_problem();
    j["h1"]["variant"] = "mystery";
    CHECK(error_location(j).rfind("$.h1", 0) == 0);

    j = sl3_problem();
    j["h2"]["X"] = Json::array({1, 2, 3});
    CHECK(error_location(j).rfind("$.h2", 0) == 0);

    j = sl3_problem();
    j["budgets"]["headroom"] = 2.0;
    CHECK(error_location(j).rfind("$.budgets", 0) == 0);

    j = sl3_problem();
    j["schema"] = "propcrit.problem/9";
    CHECK(error_location(j) == "$.schema");

    j = sl3_problem();
    j.erase("ambient");
    CHECK(error_location(j).rfind("$", 0) == 0);

    j = Json::parse(R"({"ambient": {"kind": "SL", "n": 2},
        "h1": {"variant": "discrete", "generators": [[[1,2],[2,4]]]},
        "h2": {"variant": "element_list", "elements": [[[1,0],[0,1]]]}})");
    CHECK(error_location(j).rfind("$.h1", 0) == 0);
}

TEST_CASE("verdicts round-trip bit-exactly") {
    const PropernessProblem p = problem_from_json(sl3_problem());
    for (Mode m : {Mode::exact, Mode::sampled}) {
        PropernessProblem q = p;
        q.mode = m;
        const Verdict v = decide(q);
        const Verdict back = verdict_from_json(Json::parse(verdict_to_json(v).dump()));
        CHECK(same_verdict(v, back));
    }
    // infinite gap serializes as null
    Json t = sl3_problem();
    t["h2"] = Json::parse(R"({"variant": "element_list", "elements": [[[1,0,0],[0,1,0],[0,0,1]]]})");
    const Verdict v = decide(problem_from_json(t));
    const Json jv = verdict_to_json(v);
    CHECK(jv.dump().find("null") != std::string::npos);
    CHECK(same_verdict(v, verdict_from_json(jv)));
    CHECK(verdict_exit_code(v) == 0);
}

TEST_CASE("reports are deterministic apart from the timestamp") {
    const PropernessProblem p = problem_from_json(sl3_problem());
    auto build = [&] {
        Json r = report_json("decide", Tolerance{}, p.seed);
        r["problem"] = problem_to_json(p);
        r["verdict"] = verdict_to_json(decide(p));
        return r.dump();
    };
    CHECK(build() == build());
    const Json r = report_json("decide", Tolerance{}, 3);
    CHECK(r["schema"] == kReportSchema);
    CHECK(r["tool_version"] == kToolVersion);
    CHECK(utc_timestamp().back() == 'Z');
}

TEST_CASE("command-line matrices") {
    const Matrix a = parse_matrix("[[1,1],[0,1]]");
    CHECK(a(0, 1) == 1.0);
    CHECK(a(1, 0) == 0.0);
    CHECK(parse_matrix("[2, 0, 0, 0.5]")(1, 1) == 0.5);
    CHECK_THROWS_AS(parse_matrix("[1, 2, 3]"), InputError);
    CHECK_THROWS_AS(parse_matrix("[[1,2],[3]]"), InputError);
    CHECK_THROWS_AS(parse_matrix("nonsense"), InputError);
}
