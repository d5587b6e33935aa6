#pragma once

#include <stdexcept>
#include <variant>

#include "htn/model.hpp"

namespace htn {

class NotApplicable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Replaces every variable bound in sigma; unbound variables remain.
Predicate ground(const Predicate& p, const Substitution& sigma);

// Ground operator instance: an operator with all parameters bound.
struct GroundOperator {
    std::string name;
    std::vector<Term> args;
    std::vector<Predicate> pre_pos, pre_neg;
    std::vector<Predicate> eff_add, eff_del;
    std::vector<Predicate> protect_add, protect_cancel;
};

// Instantiates op with sigma; throws if any parameter stays unbound.
GroundOperator instantiate(const Operator& op, const Substitution& sigma);

bool applicable(const GroundOperator& o, const State& s);

// (s \ eff_del) U eff_add; value semantics. Throws NotApplicable.
State apply(const GroundOperator& o, const State& s);

struct ExecutionTrace {
    std::vector<State> states;          // s_0..s_n on success
    int failure_index = -1;             // first inapplicable step, or -1
    bool ok() const { return failure_index < 0; }
};

ExecutionTrace executable(const std::vector<GroundOperator>& seq, const State& s);

// Every substitution grounding all variables of pre_pos such that
// ground(pre_pos) is in s and ground(pre_neg) misses s. Deterministic:
// predicates are matched in listed order, facts in insertion order.
// The seed substitution is extended, not replaced.
std::vector<Substitution> satisfying_bindings(const std::vector<Predicate>& pre_pos,
                                              const std::vector<Predicate>& pre_neg,
                                              const State& s,
                                              const Substitution& seed = {});

// Monotone id source for task copies within one search run.
class IdGen {
public:
    explicit IdGen(int next = 1) : next_(next) {}
    int fresh() { return next_++; }
    int peek() const { return next_; }

private:
    int next_;
};

// Isomorphic copy of tn with globally fresh task ids.
TaskNetwork rename_fresh(const TaskNetwork& tn, IdGen& ids);

// Copy of a method branch network with fresh ids and fresh variable
// names (variables bound by sigma are substituted instead).
TaskNetwork instantiate_network(const TaskNetwork& tn, const Substitution& sigma,
                                IdGen& ids, int copy_tag,
                                std::vector<int>* new_ids = nullptr,
                                Substitution* out_full = nullptr);

// Plan-based decomposition: replace t by a fresh copy of branch.network,
// inheriting t's ordering and state constraints onto the copy.
// head_params are the method's parameters, unified against t's args.
// out_sigma receives the head unifier extended with the copy's
// variable renaming, so callers can instantiate branch-level formulas
// consistently with the copied network.
TaskNetwork decompose_po(const TaskNetwork& tn_c, const TaskInstance& t,
                         const std::vector<Term>& head_params, const MethodBranch& branch,
                         IdGen& ids, std::vector<int>* new_ids = nullptr,
                         Substitution* out_sigma = nullptr);

// State-based decomposition: same replacement, ordering-only constraints,
// sigma (head unifier + precondition bindings) applied to the copy.
// Throws NotApplicable when the branch precondition fails in s.
TaskNetwork decompose_state(const State& s, const TaskNetwork& tn_c, const TaskInstance& t,
                            const MethodBranch& branch, const Substitution& sigma,
                            IdGen& ids, std::vector<int>* new_ids = nullptr);

}  // namespace htn
