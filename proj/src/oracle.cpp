#include "htn/oracle.hpp"

#include <deque>

namespace htn {

namespace {

// Local reimplementations on purpose: the oracle must not depend on the
// engines' search helpers, only on the model types.

void match_rec(const std::vector<Predicate>& pre, size_t idx, const State& s,
               const Substitution& sigma, std::vector<Substitution>& out) {
    if (idx == pre.size()) {
        out.push_back(sigma);
        return;
    }
    Predicate want = sigma.apply(pre[idx]);
    for (const auto& f : s.facts()) {
        auto next = unify(want, f, sigma);
        if (next) match_rec(pre, idx + 1, s, *next, out);
    }
}

std::vector<Substitution> oracle_match(const std::vector<Predicate>& pre_pos,
                                       const std::vector<Predicate>& pre_neg, const State& s,
                                       const Substitution& seed) {
    std::vector<Substitution> pos;
    match_rec(pre_pos, 0, s, seed, pos);
    std::vector<Substitution> out;
    for (const auto& sigma : pos) {
        bool ok = true;
        for (const auto& p : pre_neg)
            if (s.contains(sigma.apply(p))) ok = false;
        if (ok) out.push_back(sigma);
    }
    return out;
}

struct ONode {
    State s;
    TaskNetwork tn;
    std::vector<GroundStep> steps;
    int depth = 0;
};

Predicate suffixed(const Predicate& p, const std::string& suffix) {
    Predicate out = p;
    for (auto& a : out.args)
        if (a.is_variable()) a = Term::var(a.text + suffix);
    return out;
}

}  // namespace

OracleResult oracle_enumerate(const PlanningProblem& pp, int depth_bound) {
    OracleResult result;
    int next_id = pp.problem.next_task_id;
    long copy = 0;

    std::deque<ONode> queue;
    queue.push_back({pp.problem.init, pp.problem.network, {}, 0});
    while (!queue.empty()) {
        ONode n = std::move(queue.front());
        queue.pop_front();
        if (n.tn.empty()) {
            result.plans.insert(n.steps);
            continue;
        }
        if (n.depth >= depth_bound) {
            result.complete = false;
            continue;
        }
        for (int tid : n.tn.minimal_tasks()) {
            const TaskInstance t = *n.tn.find_task(tid);
            if (t.is_primitive()) {
                const Operator* op = pp.domain.find_operator(t.name);
                if (!op) continue;
                std::string sfx = "~" + std::to_string(++copy);
                std::vector<Term> params = op->params;
                for (auto& p : params)
                    if (p.is_variable()) p = Term::var(p.text + sfx);
                auto seed = unify_args(params, t.args, {});
                if (!seed) continue;
                std::vector<Predicate> pre_pos, pre_neg;
                for (const auto& p : op->pre_pos) pre_pos.push_back(suffixed(p, sfx));
                for (const auto& p : op->pre_neg) pre_neg.push_back(suffixed(p, sfx));
                for (const auto& sigma : oracle_match(pre_pos, pre_neg, n.s, *seed)) {
                    std::vector<Term> args = sigma.apply(params);
                    bool ground_args = true;
                    for (const auto& a : args)
                        if (a.is_variable()) ground_args = false;
                    if (!ground_args) continue;
                    State s2 = n.s;
                    for (const auto& p : op->eff_del) s2.remove(sigma.apply(suffixed(p, sfx)));
                    for (const auto& p : op->eff_add) s2.add(sigma.apply(suffixed(p, sfx)));
                    ONode child{std::move(s2), n.tn, n.steps, n.depth + 1};
                    child.tn.remove_task(tid);
                    child.steps.push_back({t.name, args});
                    queue.push_back(std::move(child));
                }
            } else {
                const Method* m = pp.domain.find_method(t.name);
                if (!m) continue;
                for (const auto& branch : m->branches) {
                    std::string sfx = "~" + std::to_string(++copy);
                    std::vector<Term> params = m->params;
                    for (auto& p : params)
                        if (p.is_variable()) p = Term::var(p.text + sfx);
                    auto seed = unify_args(params, t.args, {});
                    if (!seed) continue;
                    std::vector<Predicate> pre_pos, pre_neg;
                    for (const auto& p : branch.pre_pos) pre_pos.push_back(suffixed(p, sfx));
                    for (const auto& p : branch.pre_neg) pre_neg.push_back(suffixed(p, sfx));
                    for (const auto& sigma : oracle_match(pre_pos, pre_neg, n.s, *seed)) {
                        ONode child{n.s, n.tn, n.steps, n.depth + 1};
                        child.tn.remove_task(tid);
                        // Fresh ids and suffixed variables for the copy.
                        std::map<int, int> remap;
                        for (const auto& bt : branch.network.tasks) {
                            TaskInstance nt;
                            nt.id = next_id++;
                            remap[bt.id] = nt.id;
                            nt.name = bt.name;
                            for (const auto& a : bt.args)
                                nt.args.push_back(
                                    a.is_variable() ? sigma.apply(Term::var(a.text + sfx)) : a);
                            child.tn.add_task(nt);
                        }
                        for (const auto& [a, b] : branch.network.ordering)
                            child.tn.ordering.insert({remap[a], remap[b]});
                        // The copy inherits t's predecessors and successors.
                        for (const auto& [a, b] : n.tn.ordering) {
                            if (a == tid && b != tid)
                                for (const auto& [_, nb] : remap)
                                    child.tn.ordering.insert({nb, b});
                            if (b == tid && a != tid)
                                for (const auto& [_, nb] : remap)
                                    child.tn.ordering.insert({a, nb});
                        }
                        queue.push_back(std::move(child));
                    }
                }
            }
        }
    }
    return result;
}

}  // namespace htn
