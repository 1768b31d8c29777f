#pragma once

#include <padlex/verify.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace padlex {

// One batch step.  `method` names the construction for extend and glue
// tasks; `claimed` is the bound a verify-lipschitz task certifies against.
struct TaskSpec {
    std::string kind;  // check-jacobian | verify-identities | extend | glue | verify-lipschitz
    std::string method;
    std::optional<Rat> claimed;
    SampleConfig cfg;
};

// A whole problem file: the prime, working precision, order window, the
// claimed input constant lambda, the family of rules, and the task list.
struct ProblemSpec {
    std::int64_t p = 3;
    std::int32_t precision = 8;
    std::int64_t window_lo = 0;
    std::int64_t window_hi = 0;
    Rat lambda = Rat(1);
    Family family;
    std::vector<TaskSpec> tasks;
};

// Parses and validates a problem document.  Rejects malformed JSON, a bad
// schema tag, composite p, precision below max(m, m') + 4, empty families,
// unparseable rationals, and unknown tasks — all as SpecParseError.
ProblemSpec parse_problem(const std::string& text);

// Canonical serialized form: every field explicit, keys sorted, stable
// across parse/serialize round trips.
std::string problem_to_json(const ProblemSpec& spec);

std::string extension_to_json(const ExtendedFunction& ext, std::int64_t p);
ExtendedFunction extension_from_json(const std::string& text, std::int64_t p);

// A file the run wants written next to the report (extension serializations).
struct Artifact {
    std::string name;
    std::string content;
};

struct TaskOutcome {
    std::string name;
    bool pass = true;
    std::string report;
    std::vector<Artifact> artifacts;
};

struct RunReport {
    std::int64_t p = 0;
    bool pass = true;
    std::vector<std::string> notes;
    std::vector<TaskOutcome> tasks;

    std::string text() const;
    std::string json_doc() const;
};

// Executes the tasks in order.  Verification tasks run against the family
// as given; extend and glue tasks run on the lambda-rescaled family and the
// results are scaled back.  Deterministic for a fixed spec.
RunReport run_problem(const ProblemSpec& spec);

// Builds the extension described by spec.tasks[task_index] (an extend or
// glue task).  member_index selects the family member for extend tasks and
// is ignored for glue.
ExtendedFunction build_task_extension(const ProblemSpec& spec, std::size_t task_index,
                                      std::size_t member_index);

// Evaluation guarded by the spec's representable range: orders of x must
// lie within precision of the window, otherwise
// OutsideRepresentablePrecision.
PadicScalar eval_in_window(const ExtendedFunction& ext, const PadicScalar& x,
                           std::int64_t window_lo, std::int64_t window_hi,
                           std::int32_t precision);

}  // namespace padlex
