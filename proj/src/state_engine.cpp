#include "htn/state_engine.hpp"

#include <algorithm>

namespace htn {

std::vector<TaskInstance> frontier_tasks(const TaskNetwork& tn, Style style) {
    std::vector<TaskInstance> out;
    for (int id : tn.minimal_tasks()) out.push_back(*tn.find_task(id));
    if (style == Style::TOTD && out.size() > 1)
        throw OrderingViolation("TOTD requires a totally ordered network, found " +
                                std::to_string(out.size()) + " minimal tasks");
    return out;
}

bool check_protection(const GroundOperator& op, std::set<Predicate>& active) {
    for (const auto& p : op.protect_cancel) active.erase(p);  // no-op when absent
    for (const auto& p : op.eff_del)
        if (active.count(p)) return false;
    for (const auto& p : op.protect_add) active.insert(p);
    return true;
}

namespace {

// Scope-separates a definition's variables from the variables of the
// task instance being matched.
Term suffix_var(const Term& t, const std::string& suffix) {
    return t.is_variable() ? Term::var(t.text + suffix) : t;
}

Predicate suffix_vars(const Predicate& p, const std::string& suffix) {
    Predicate out = p;
    for (auto& a : out.args) a = suffix_var(a, suffix);
    return out;
}

std::vector<Term> suffix_params(const std::vector<Term>& params, const std::string& suffix) {
    std::vector<Term> out = params;
    for (auto& p : out) p = suffix_var(p, suffix);
    return out;
}

std::vector<Predicate> suffix_preds(const std::vector<Predicate>& ps, const std::string& suffix) {
    std::vector<Predicate> out = ps;
    for (auto& p : out) p = suffix_vars(p, suffix);
    return out;
}

MethodBranch suffix_branch(const MethodBranch& br, const std::string& suffix) {
    MethodBranch out = br;
    out.pre_pos = suffix_preds(br.pre_pos, suffix);
    out.pre_neg = suffix_preds(br.pre_neg, suffix);
    out.filter = suffix_preds(br.filter, suffix);
    for (auto& t : out.network.tasks)
        for (auto& a : t.args) a = suffix_var(a, suffix);
    for (auto& b : out.network.bindings) {
        b.lhs = suffix_var(b.lhs, suffix);
        b.rhs = suffix_var(b.rhs, suffix);
    }
    for (auto& c : out.network.state_constraints) c.pred = suffix_vars(c.pred, suffix);
    return out;
}

struct Search {
    const PlanningProblem& pp;
    Budget budget;
    StateEngineOptions opts;
    SearchStats stats;
    std::vector<Plan> plans;
    bool budget_hit = false;
    bool done = false;
    IdGen ids;
    long rename_tag = 0;

    Search(const PlanningProblem& p, const Budget& b, const StateEngineOptions& o)
        : pp(p), budget(b), opts(o), ids(p.problem.next_task_id) {}

    bool stop() const { return budget_hit || done; }

    void record_plan(const std::vector<GroundStep>& steps,
                     const std::vector<DecompositionRecord>& trace) {
        Plan plan{steps, trace};
        if (std::find(plans.begin(), plans.end(), plan) == plans.end())
            plans.push_back(std::move(plan));
        if (!opts.all_solutions) done = true;
    }

    void dfs(const State& s, const TaskNetwork& tn, std::vector<GroundStep>& steps,
             std::vector<DecompositionRecord>& trace, const std::set<Predicate>& protections,
             int depth) {
        if (stop()) return;
        ++stats.nodes_expanded;
        stats.max_depth = std::max<long>(stats.max_depth, depth);
        if (depth >= budget.max_depth) {
            budget_hit = true;
            return;
        }
        if (tn.empty()) {
            record_plan(steps, trace);
            return;
        }
        auto frontier = frontier_tasks(tn, pp.problem.style == Style::TOTD ? Style::TOTD
                                                                           : Style::UTD);
        bool first_choice = true;
        for (const auto& t : frontier) {
            if (stop()) return;
            if (!first_choice) ++stats.backtracks;
            first_choice = false;
            if (t.is_primitive()) expand_primitive(s, tn, t, steps, trace, protections, depth);
            else expand_compound(s, tn, t, steps, trace, protections, depth);
        }
    }

    void expand_primitive(const State& s, const TaskNetwork& tn, const TaskInstance& t,
                          std::vector<GroundStep>& steps,
                          std::vector<DecompositionRecord>& trace,
                          const std::set<Predicate>& protections, int depth) {
        const Operator* op = pp.domain.find_operator(t.name);
        if (!op) throw std::runtime_error("no operator for task " + t.name);
        std::string suffix = "#o" + std::to_string(++rename_tag);
        auto params = suffix_params(op->params, suffix);
        auto seed = unify_args(params, t.args, {});
        if (!seed) return;
        auto pre_pos = suffix_preds(op->pre_pos, suffix);
        auto pre_neg = suffix_preds(op->pre_neg, suffix);
        bool first = true;
        for (const auto& sigma : satisfying_bindings(pre_pos, pre_neg, s, *seed)) {
            if (stop()) return;
            if (!first) ++stats.backtracks;
            first = false;
            GroundOperator g;
            try {
                Operator renamed = *op;
                renamed.params = params;
                renamed.pre_pos = pre_pos;
                renamed.pre_neg = pre_neg;
                renamed.eff_add = suffix_preds(op->eff_add, suffix);
                renamed.eff_del = suffix_preds(op->eff_del, suffix);
                renamed.protect_add = suffix_preds(op->protect_add, suffix);
                renamed.protect_cancel = suffix_preds(op->protect_cancel, suffix);
                g = instantiate(renamed, sigma);
            } catch (const NotApplicable&) {
                continue;  // parameters not fully decided by this binding
            }
            std::set<Predicate> next_protections = protections;
            if (opts.protections && !check_protection(g, next_protections)) {
                ++stats.backtracks;  // protection violation prunes the branch
                continue;
            }
            ++stats.applications;
            State next = apply(g, s);
            TaskNetwork rest = tn;
            rest.remove_task(t.id);
            steps.push_back({g.name, g.args});
            dfs(next, rest, steps, trace, next_protections, depth + 1);
            steps.pop_back();
        }
    }

    void expand_compound(const State& s, const TaskNetwork& tn, const TaskInstance& t,
                         std::vector<GroundStep>& steps,
                         std::vector<DecompositionRecord>& trace,
                         const std::set<Predicate>& protections, int depth) {
        const Method* m = pp.domain.find_method(t.name);
        if (!m) throw std::runtime_error("no method for task " + t.name);
        for (const auto& branch : m->branches) {
            if (stop()) return;
            std::string suffix = "#m" + std::to_string(++rename_tag);
            auto params = suffix_params(m->params, suffix);
            auto seed = unify_args(params, t.args, {});
            if (!seed) continue;  // silent branch skip on argument clash
            MethodBranch br = suffix_branch(branch, suffix);
            auto sigmas = satisfying_bindings(br.pre_pos, br.pre_neg, s, *seed);
            bool first = true;
            for (const auto& sigma : sigmas) {
                if (stop()) return;
                if (!first) ++stats.backtracks;
                first = false;
                if (stats.decompositions >= budget.max_decompositions) {
                    budget_hit = true;
                    return;
                }
                ++stats.decompositions;
                std::vector<int> children;
                TaskNetwork next = decompose_state(s, tn, t, br, sigma, ids, &children);
                trace.push_back({t.id, t.name, sigma.apply(t.args), m->name, branch.rank, sigma,
                                 children});
                dfs(s, next, steps, trace, protections, depth + 1);
                trace.pop_back();
            }
            if (opts.commit_first_branch && !sigmas.empty()) break;
        }
    }
};

}  // namespace

StateSearchResult plan_state(const PlanningProblem& pp, const Budget& budget,
                             const StateEngineOptions& opts) {
    Search search(pp, budget, opts);
    std::vector<GroundStep> steps;
    std::vector<DecompositionRecord> trace;
    search.dfs(pp.problem.init, pp.problem.network, steps, trace, {}, 0);

    StateSearchResult result;
    result.stats = search.stats;
    result.complete = !search.budget_hit;
    result.plans = std::move(search.plans);
    if (!result.plans.empty()) result.outcome = SearchOutcome::Solved;
    else if (search.budget_hit) result.outcome = SearchOutcome::BudgetExhausted;
    else result.outcome = SearchOutcome::NoSolution;
    return result;
}

StateSearchResult all_plans_state(const PlanningProblem& pp, const Budget& budget) {
    StateEngineOptions opts;
    opts.all_solutions = true;
    return plan_state(pp, budget, opts);
}

}  // namespace htn
