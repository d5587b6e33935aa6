#include "htn/core.hpp"

#include <algorithm>
#include <functional>

namespace htn {

Predicate ground(const Predicate& p, const Substitution& sigma) {
    return sigma.apply(p);
}

GroundOperator instantiate(const Operator& op, const Substitution& sigma) {
    GroundOperator g;
    g.name = op.name;
    g.args = sigma.apply(op.params);
    for (const auto& a : g.args)
        if (a.is_variable())
            throw NotApplicable("unbound parameter " + a.text + " in " + op.name);
    auto inst = [&](const std::vector<Predicate>& ps) {
        std::vector<Predicate> out;
        out.reserve(ps.size());
        for (const auto& p : ps) out.push_back(sigma.apply(p));
        return out;
    };
    g.pre_pos = inst(op.pre_pos);
    g.pre_neg = inst(op.pre_neg);
    g.eff_add = inst(op.eff_add);
    g.eff_del = inst(op.eff_del);
    g.protect_add = inst(op.protect_add);
    g.protect_cancel = inst(op.protect_cancel);
    return g;
}

bool applicable(const GroundOperator& o, const State& s) {
    for (const auto& p : o.pre_pos) {
        if (!p.is_ground()) throw NotApplicable("non-ground precondition " + p.to_string());
        if (!s.contains(p)) return false;
    }
    for (const auto& p : o.pre_neg) {
        if (!p.is_ground()) throw NotApplicable("non-ground precondition " + p.to_string());
        if (s.contains(p)) return false;
    }
    return true;
}

State apply(const GroundOperator& o, const State& s) {
    if (!applicable(o, s)) throw NotApplicable("operator " + o.name + " not applicable");
    State out = s;
    for (const auto& p : o.eff_del) out.remove(p);
    for (const auto& p : o.eff_add) out.add(p);
    return out;
}

ExecutionTrace executable(const std::vector<GroundOperator>& seq, const State& s) {
    ExecutionTrace trace;
    trace.states.push_back(s);
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (!applicable(seq[i], trace.states.back())) {
            trace.failure_index = static_cast<int>(i);
            return trace;
        }
        trace.states.push_back(apply(seq[i], trace.states.back()));
    }
    return trace;
}

std::vector<Substitution> satisfying_bindings(const std::vector<Predicate>& pre_pos,
                                              const std::vector<Predicate>& pre_neg,
                                              const State& s, const Substitution& seed) {
    std::vector<Substitution> out;
    std::function<void(std::size_t, Substitution)> match = [&](std::size_t idx,
                                                               Substitution sigma) {
        if (idx == pre_pos.size()) {
            for (const auto& neg : pre_neg) {
                Predicate g = sigma.apply(neg);
                if (s.contains(g)) return;
            }
            out.push_back(std::move(sigma));
            return;
        }
        Predicate goal = sigma.apply(pre_pos[idx]);
        if (goal.is_ground()) {
            if (s.contains(goal)) match(idx + 1, std::move(sigma));
            return;
        }
        for (const auto& fact : s.facts()) {
            auto next = unify(goal, fact, sigma);
            if (next) match(idx + 1, std::move(*next));
        }
    };
    match(0, seed);
    return out;
}

TaskNetwork rename_fresh(const TaskNetwork& tn, IdGen& ids) {
    std::map<int, int> remap;
    TaskNetwork out;
    for (const auto& t : tn.tasks) {
        TaskInstance copy = t;
        copy.id = ids.fresh();
        remap[t.id] = copy.id;
        out.add_task(std::move(copy));
    }
    for (const auto& [a, b] : tn.ordering) out.ordering.insert({remap.at(a), remap.at(b)});
    out.bindings = tn.bindings;
    for (const auto& c : tn.state_constraints) {
        StateConstraint copy = c;
        if (copy.first >= 0) copy.first = remap.at(copy.first);
        if (copy.second >= 0) copy.second = remap.at(copy.second);
        out.state_constraints.push_back(copy);
    }
    return out;
}

TaskNetwork instantiate_network(const TaskNetwork& tn, const Substitution& sigma, IdGen& ids,
                                int copy_tag, std::vector<int>* new_ids, Substitution* out_full) {
    TaskNetwork out = rename_fresh(tn, ids);
    // Variables not decided by sigma get a copy-unique suffix so two
    // expansions of the same method never share free variables.
    Substitution full = sigma;
    auto freshen = [&](const Term& t) {
        if (!t.is_variable() || full.bound(t.text)) return;
        full.bind(t.text, Term::var(t.text + "#" + std::to_string(copy_tag)));
    };
    for (const auto& t : out.tasks)
        for (const auto& a : t.args) freshen(a);
    for (const auto& b : out.bindings) {
        freshen(b.lhs);
        freshen(b.rhs);
    }
    for (const auto& c : out.state_constraints)
        for (const auto& a : c.pred.args) freshen(a);
    out.apply_substitution(full);
    if (out_full) *out_full = full;
    if (new_ids)
        for (const auto& t : out.tasks) new_ids->push_back(t.id);
    return out;
}

namespace {

// Constraint inheritance shared by both decomposition flavours:
// orderings incident to the replaced task map onto every new task.
void inherit_ordering(TaskNetwork& tn_n, const TaskNetwork& tn_c, int replaced,
                      const std::vector<int>& fresh) {
    for (const auto& [a, b] : tn_c.ordering) {
        if (b == replaced && a != replaced)
            for (int n : fresh) tn_n.ordering.insert({a, n});
        if (a == replaced && b != replaced)
            for (int n : fresh) tn_n.ordering.insert({n, b});
    }
}

}  // namespace

TaskNetwork decompose_po(const TaskNetwork& tn_c, const TaskInstance& t,
                         const std::vector<Term>& head_params, const MethodBranch& branch,
                         IdGen& ids, std::vector<int>* new_ids, Substitution* out_sigma) {
    if (!tn_c.has_task(t.id)) throw std::invalid_argument("task not in network");
    if (t.is_primitive()) throw std::invalid_argument("cannot decompose a primitive task");
    auto sigma = unify_args(head_params, t.args, {});
    if (!sigma) throw NotApplicable("argument unification failed for " + t.name);

    std::vector<int> fresh;
    Substitution full;
    TaskNetwork copy = instantiate_network(branch.network, *sigma, ids, ids.peek(), &fresh, &full);

    TaskNetwork tn_n = tn_c;
    // Inherited state constraints mentioning t map onto the copy:
    // consumer-side endpoints (before, between's right end) onto the
    // copy's minimal tasks, producer-side endpoints onto its maximal.
    std::vector<int> minimal = copy.minimal_tasks();
    std::vector<int> maximal;
    for (const auto& ct : copy.tasks) {
        bool has_succ = false;
        for (const auto& e : copy.ordering)
            if (e.first == ct.id) has_succ = true;
        if (!has_succ) maximal.push_back(ct.id);
    }
    std::vector<StateConstraint> inherited;
    for (const auto& c : tn_c.state_constraints) {
        if (c.first != t.id && c.second != t.id) continue;
        bool first_is_consumer =
            c.kind == StateConstraintKind::Before || c.kind == StateConstraintKind::NotBefore;
        const std::vector<int>& first_targets = first_is_consumer ? minimal : maximal;
        std::vector<StateConstraint> stage;
        if (c.first == t.id) {
            for (int n : first_targets) {
                StateConstraint mapped = c;
                mapped.first = n;
                stage.push_back(mapped);
            }
        } else {
            stage.push_back(c);
        }
        for (auto& mapped : stage) {
            if (mapped.second == t.id) {
                for (int n : minimal) {
                    StateConstraint m2 = mapped;
                    m2.second = n;
                    inherited.push_back(m2);
                }
            } else {
                inherited.push_back(mapped);
            }
        }
    }
    inherit_ordering(tn_n, tn_c, t.id, fresh);
    tn_n.remove_task(t.id);
    for (const auto& nt : copy.tasks) tn_n.add_task(nt);
    for (const auto& e : copy.ordering) tn_n.ordering.insert(e);
    for (const auto& b : copy.bindings) tn_n.bindings.push_back(b);
    for (const auto& c : copy.state_constraints) tn_n.state_constraints.push_back(c);
    for (const auto& c : inherited) tn_n.state_constraints.push_back(c);
    if (new_ids) *new_ids = fresh;
    if (out_sigma) *out_sigma = full;
    return tn_n;
}

TaskNetwork decompose_state(const State& s, const TaskNetwork& tn_c, const TaskInstance& t,
                            const MethodBranch& branch, const Substitution& sigma, IdGen& ids,
                            std::vector<int>* new_ids) {
    if (!tn_c.has_task(t.id)) throw std::invalid_argument("task not in network");
    if (t.is_primitive()) throw std::invalid_argument("cannot decompose a primitive task");
    for (const auto& p : branch.pre_pos)
        if (!s.contains(sigma.apply(p)))
            throw NotApplicable("method precondition " + p.to_string() + " fails");
    for (const auto& p : branch.pre_neg)
        if (s.contains(sigma.apply(p)))
            throw NotApplicable("method precondition (not " + p.to_string() + ") fails");

    std::vector<int> fresh;
    TaskNetwork copy = instantiate_network(branch.network, sigma, ids, ids.peek(), &fresh);

    TaskNetwork tn_n = tn_c;
    inherit_ordering(tn_n, tn_c, t.id, fresh);
    tn_n.remove_task(t.id);
    for (const auto& nt : copy.tasks) tn_n.add_task(nt);
    for (const auto& e : copy.ordering) tn_n.ordering.insert(e);
    if (new_ids) *new_ids = fresh;
    return tn_n;
}

}  // namespace htn
