#include "htn/validate.hpp"

#include <algorithm>
#include <map>

#include "htn/core.hpp"

namespace htn {

namespace {

ValidationResult invalid(int step, std::string reason) {
    return {false, step, std::move(reason)};
}

}  // namespace

ValidationResult validate_plan(const Plan& plan, const PlanningProblem& pp) {
    // Step replay from s_0: applicability and transition only.
    State s = pp.problem.init;
    for (size_t k = 0; k < plan.steps.size(); ++k) {
        const GroundStep& step = plan.steps[k];
        int idx = static_cast<int>(k);
        const Operator* op = pp.domain.find_operator(step.name);
        if (!op) return invalid(idx, "unknown operator " + step.name);
        auto sigma = unify_args(op->params, step.args, {});
        if (!sigma) return invalid(idx, "argument count mismatch for " + step.name);
        GroundOperator g;
        try {
            g = instantiate(*op, *sigma);
        } catch (const NotApplicable&) {
            return invalid(idx, "non-ground step " + step.to_string());
        }
        for (const auto& p : g.pre_pos)
            if (!s.contains(p)) return invalid(idx, "precondition " + p.to_string() + " absent");
        for (const auto& p : g.pre_neg)
            if (s.contains(p))
                return invalid(idx, "negative precondition " + p.to_string() + " violated");
        s = apply(g, s);
    }

    // Trace audit: the decomposition records must form a tree over the
    // initial network whose primitive leaves account for the steps.
    std::map<int, std::string> known;  // task id -> name
    for (const auto& t : pp.problem.network.tasks) known[t.id] = t.name;
    std::map<int, bool> decomposed;
    for (const auto& r : plan.trace) {
        auto it = known.find(r.task_id);
        if (it == known.end())
            return invalid(-1, "trace decomposes unknown task id " + std::to_string(r.task_id));
        if (it->second != r.task_name)
            return invalid(-1, "trace names task " + r.task_name + " for id " +
                                   std::to_string(r.task_id) + " which is " + it->second);
        if (is_primitive_name(r.task_name))
            return invalid(-1, "trace decomposes primitive task " + r.task_name);
        if (decomposed[r.task_id])
            return invalid(-1, "task id " + std::to_string(r.task_id) + " decomposed twice");
        decomposed[r.task_id] = true;

        const Method* m = pp.domain.find_method(r.method_name);
        if (!m) return invalid(-1, "trace names unknown method " + r.method_name);
        if (m->name != r.task_name)
            return invalid(-1, "method " + r.method_name + " does not refine " + r.task_name);
        const MethodBranch* branch = nullptr;
        for (const auto& b : m->branches)
            if (b.rank == r.branch_rank) branch = &b;
        if (!branch)
            return invalid(-1, "method " + r.method_name + " has no branch rank " +
                                   std::to_string(r.branch_rank));

        const auto& expected = branch->network.tasks;
        bool noop_carrier = expected.empty() && r.child_ids.size() == 1;
        if (!noop_carrier && expected.size() != r.child_ids.size())
            return invalid(-1, "branch " + std::to_string(r.branch_rank) + " of " + m->name +
                                   " yields " + std::to_string(expected.size()) +
                                   " tasks, trace records " +
                                   std::to_string(r.child_ids.size()));
        for (size_t i = 0; i < r.child_ids.size(); ++i) {
            int id = r.child_ids[i];
            if (known.count(id))
                return invalid(-1, "child task id " + std::to_string(id) + " is not fresh");
            known[id] = noop_carrier ? kNoopName : expected[i].name;
        }
    }

    // Every compound task must be decomposed; primitive leaves (minus
    // internal do-nothing carriers) must match the steps as a multiset.
    std::vector<std::string> leaves;
    for (const auto& [id, name] : known) {
        if (!is_primitive_name(name)) {
            if (!decomposed[id])
                return invalid(-1, "compound task " + name + " (id " + std::to_string(id) +
                                       ") never decomposed");
            continue;
        }
        if (name != kNoopName) leaves.push_back(name);
    }
    std::vector<std::string> stepped;
    for (const auto& st : plan.steps) stepped.push_back(st.name);
    std::sort(leaves.begin(), leaves.end());
    std::sort(stepped.begin(), stepped.end());
    if (leaves != stepped)
        return invalid(-1, "plan steps do not match the trace's primitive tasks");

    return {};
}

}  // namespace htn
