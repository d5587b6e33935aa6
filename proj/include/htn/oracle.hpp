#pragma once

#include <set>
#include <vector>

#include "htn/model.hpp"

namespace htn {

// Brute-force enumeration result. complete=false marks truncation by
// the depth bound (some plans may be missing).
struct OracleResult {
    std::set<std::vector<GroundStep>> plans;
    bool complete = true;
};

// Exhaustive breadth-first enumeration of every interleaving, branch,
// and binding of a state-flavoured problem, up to depth_bound expansion
// steps per candidate. Deliberately naive and written against the model
// types directly, independent of both engines: this is the reference
// the engines are tested against.
OracleResult oracle_enumerate(const PlanningProblem& pp, int depth_bound);

}  // namespace htn
