#pragma once

#include <set>
#include <stdexcept>

#include "htn/core.hpp"

namespace htn {

class OrderingViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SearchOutcome { Solved, NoSolution, BudgetExhausted };

struct StateSearchResult {
    SearchOutcome outcome = SearchOutcome::NoSolution;
    std::vector<Plan> plans;  // one entry unless all_solutions
    SearchStats stats;
    bool complete = true;  // false when the budget truncated the space
};

struct StateEngineOptions {
    bool all_solutions = false;
    // Commit to the first applicable branch instead of backtracking
    // into later branches on downstream failure.
    bool commit_first_branch = false;
    // Honor :protect/:cancel marks. Domains without marks are
    // unaffected, so protection is effectively opt-in per domain file.
    bool protections = true;
};

// Tasks with no predecessor. TOTD demands a unique minimal task and
// throws OrderingViolation otherwise; UTD returns all, in id order.
std::vector<TaskInstance> frontier_tasks(const TaskNetwork& tn, Style style);

// Protection bookkeeping for one operator application. Returns false on
// a violation (deleting a protected predicate without cancelling it).
bool check_protection(const GroundOperator& op, std::set<Predicate>& active);

StateSearchResult plan_state(const PlanningProblem& pp, const Budget& budget,
                             const StateEngineOptions& opts = {});

// Exhaustive variant backing the oracle-equivalence tests.
StateSearchResult all_plans_state(const PlanningProblem& pp, const Budget& budget);

}  // namespace htn
