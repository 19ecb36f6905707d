#pragma once

// JSON problem and report files.
//
// Problem schema "propcrit.problem/1":
//   { "schema": "propcrit.problem/1",
//     "ambient": {"kind": "SL" | "GL", "n": N},
//     "h1": spec, "h2": spec,
//     "mode": "exact" | "sampled" | "auto",          (optional, default auto)
//     "budgets": {word_length, radius, rho, mesh,      (all optional)
//                 probe_radius, headroom, samples},
//     "seed": integer }                                (optional, default 0)
//   spec: {"variant": "reductive_cartan", "generators": [M, ...]}
//       | {"variant": "discrete", "generators": [M, ...]}
//       | {"variant": "one_parameter", "X": M}
//       | {"variant": "element_list", "elements": [M, ...]}
//   M: nested rows [[a, b], [c, d]] or a flat row-major array [a, b, c, d].
//
// Report schema "propcrit.report/1": see report_json().

#include "propcrit/properness.hpp"

#include "json.hpp"

#include <stdexcept>
#include <string>

namespace propcrit {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kProblemSchema = "propcrit.problem/1";
inline constexpr const char* kReportSchema = "propcrit.report/1";

/// Malformed input; `location` is a JSON path such as "$.h1.generators[0][1]".
class InputError : public std::runtime_error {
public:
    InputError(std::string location, const std::string& message)
        : std::runtime_error(location + ": " + message), location_(std::move(location)) {}
    const std::string& location() const { return location_; }

private:
    std::string location_;
};

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& where);
/// Parses "[[1,1],[0,1]]" (or a flat square array) from the command line.
Matrix parse_matrix(const std::string& text);

Json spec_to_json(const SubgroupSpec& s);
SubgroupSpec spec_from_json(const Json& j, const std::string& where);

Json budgets_to_json(const Budgets& b);
Json tolerance_to_json(const Tolerance& t);

Json problem_to_json(const PropernessProblem& p);
/// Parses and validates a problem; InputError on malformed or invalid content.
PropernessProblem problem_from_json(const Json& j, const Tolerance& tol = {});
PropernessProblem load_problem(const std::string& path, const Tolerance& tol = {});

/// Doubles are written shortest round-trip; an infinite gap is written as null.
Json verdict_to_json(const Verdict& v);
Verdict verdict_from_json(const Json& j);
/// Bitwise equality of verdict payloads.
bool same_verdict(const Verdict& a, const Verdict& b);

Json equivalence_to_json(const EquivalenceVerdict& e);
Json suite_to_json(const SuiteReport& s);
Json cross_validation_to_json(const CrossValidation& cv);

/// Exit status for a verdict: 0 proper, 1 not proper, 2 undecided.
int verdict_exit_code(const Verdict& v);

/// Skeleton report with every deterministic field; the timestamp is added last.
Json report_json(const std::string& command, const Tolerance& tol, std::uint64_t seed);
std::string utc_timestamp();

}  // namespace propcrit
