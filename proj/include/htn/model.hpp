#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "htn/types.hpp"

namespace htn {

// Primitive task names carry a leading '!', compound names do not.
inline bool is_primitive_name(const std::string& name) {
    return !name.empty() && name[0] == '!';
}

// Internal do-nothing step backing empty method branches in plan mode;
// never user-definable (the '.' is not a legal name character) and
// dropped from reported linearisations.
inline const char* kNoopName = "!.noop";

struct Operator {
    std::string name;  // with '!' prefix
    std::vector<Term> params;
    std::vector<Predicate> pre_pos, pre_neg;
    std::vector<Predicate> eff_add, eff_del;
    // Protection marks, opt-in per domain file.
    std::vector<Predicate> protect_add, protect_cancel;
    // Indices into params flagged as resources (detect-and-report only).
    std::vector<int> resource_params;
};

struct TaskInstance {
    int id = 0;
    std::string name;
    std::vector<Term> args;

    bool is_primitive() const { return is_primitive_name(name); }
    bool operator==(const TaskInstance&) const = default;
};

enum class StateConstraintKind { Before, NotBefore, After, Between };

// before(p, t): p holds in the state immediately preceding t.
// not-before(p, t): p is absent in the state immediately preceding t.
// after(t, p): p holds immediately following t.
// between(t, p, t'): p holds in every state from after t up to before t'.
struct StateConstraint {
    StateConstraintKind kind;
    Predicate pred;
    int first = -1;   // task id (After/Between: producer side; Before: consumer)
    int second = -1;  // Between only

    bool operator==(const StateConstraint&) const = default;
};

struct BindingConstraint {
    Term lhs, rhs;
    bool equal = true;  // codesignation vs separation

    bool operator==(const BindingConstraint&) const = default;
};

struct TaskNetwork {
    std::vector<TaskInstance> tasks;  // kept sorted by id
    std::set<std::pair<int, int>> ordering;
    std::vector<BindingConstraint> bindings;
    std::vector<StateConstraint> state_constraints;

    bool empty() const { return tasks.empty(); }
    bool is_primitive() const;
    const TaskInstance* find_task(int id) const;
    bool has_task(int id) const { return find_task(id) != nullptr; }
    void add_task(TaskInstance t);
    void remove_task(int id);

    // True iff b is reachable from a through ordering edges.
    bool precedes(int a, int b) const;
    // True iff the transitive closure is irreflexive.
    bool ordering_acyclic() const;
    // True iff every pair of tasks is ordered one way or the other.
    bool totally_ordered() const;
    // Tasks with no predecessor, in ascending id order.
    std::vector<int> minimal_tasks() const;
    // Total-order listing; valid only when totally_ordered().
    std::vector<int> total_order() const;

    void apply_substitution(const Substitution& sigma);
};

struct MethodBranch {
    int rank = 1;  // position in the head's if-then-else ladder
    std::vector<Predicate> pre_pos, pre_neg;  // state flavour only
    std::vector<Predicate> filter;            // plan flavour, checked against s0
    TaskNetwork network;
};

struct Method {
    std::string name;
    std::vector<Term> params;
    std::vector<MethodBranch> branches;  // ranks 1..k
};

struct PredicateDecl {
    std::string symbol;
    int arity = 0;
};

struct Domain {
    std::string name;
    std::vector<PredicateDecl> predicates;
    std::vector<Operator> operators;
    std::vector<Method> methods;

    const Operator* find_operator(const std::string& name) const;
    const Method* find_method(const std::string& name) const;
};

enum class Engine { State, Plan };
enum class Style { TOTD, UTD, POTD };

struct Budget {
    long max_decompositions = 100000;
    long max_depth = 10000;
};

struct Problem {
    std::string name;
    std::string domain_name;
    State init;
    TaskNetwork network;
    Engine engine = Engine::State;
    Style style = Style::TOTD;
    Budget budget;
    int next_task_id = 1;  // ids above the ones used by the initial network
};

struct PlanningProblem {
    Domain domain;
    Problem problem;
};

struct GroundStep {
    std::string name;
    std::vector<Term> args;

    auto operator<=>(const GroundStep&) const = default;
    std::string to_string() const;
};

// One task replacement during search; child_ids name the fresh copies of
// the method network's tasks (empty for a do-nothing branch).
struct DecompositionRecord {
    int task_id = 0;
    std::string task_name;
    std::vector<Term> task_args;
    std::string method_name;
    int branch_rank = 1;
    Substitution binding;
    std::vector<int> child_ids;
};

struct Plan {
    std::vector<GroundStep> steps;
    std::vector<DecompositionRecord> trace;

    bool operator==(const Plan& o) const { return steps == o.steps; }
    bool operator<(const Plan& o) const { return steps < o.steps; }
};

struct SearchStats {
    long nodes_expanded = 0;
    long decompositions = 0;
    long applications = 0;
    long backtracks = 0;
    long max_depth = 0;
};

}  // namespace htn
