#pragma once

#include <string>

#include "htn/model.hpp"

namespace htn {

// Outcome of an independent plan replay. Invalid is a value, never an
// exception; step_index is the offending 0-based step (or -1 when the
// failure is structural, e.g. a bad trace record).
struct ValidationResult {
    bool valid = true;
    int step_index = -1;
    std::string reason;
};

// Replays the plan from s_0 with core applicability/transition checks
// only, then audits the decomposition trace: every record must name an
// existing method branch whose network matches the recorded children,
// and the trace's primitive leaves must account for the plan's steps.
// Shares no code with either engine's search loop.
ValidationResult validate_plan(const Plan& plan, const PlanningProblem& pp);

}  // namespace htn
