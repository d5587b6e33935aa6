#include "htn/plan_engine.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace htn {

namespace {

bool is_noop(const TaskInstance& t) { return t.name == kNoopName; }

// Unifier of the operator's parameter list against the task's arguments.
std::optional<Substitution> op_binding(const Operator& op, const TaskInstance& t) {
    return unify_args(op.params, t.args, {});
}

std::vector<Predicate> task_effects(const TaskInstance& t, const Domain& d, bool adds) {
    if (!t.is_primitive() || is_noop(t)) return {};
    const Operator* op = d.find_operator(t.name);
    if (!op) return {};
    auto sigma = op_binding(*op, t);
    if (!sigma) return {};
    std::vector<Predicate> out;
    for (const auto& p : adds ? op->eff_add : op->eff_del) out.push_back(sigma->apply(p));
    return out;
}

// True when sigma would violate a separation (not-equal) constraint.
bool violates_separation(const Substitution& sigma, const TaskNetwork& tn) {
    for (const auto& b : tn.bindings) {
        if (b.equal) continue;
        Term l = sigma.apply(b.lhs);
        Term r = sigma.apply(b.rhs);
        if (l.is_constant() && r.is_constant() && l == r) return true;
    }
    return false;
}

struct Consumer {
    int task;
    Predicate pred;
    std::vector<int> producers;  // fixed by a causal link when non-empty
};

std::vector<Consumer> collect_consumers(const RefinementNode& n, const Domain& d) {
    std::vector<Consumer> out;
    auto put = [&](int task, const Predicate& pred) -> Consumer& {
        for (auto& c : out)
            if (c.task == task && c.pred == pred) return c;
        out.push_back({task, pred, {}});
        return out.back();
    };
    for (const auto& t : n.network.tasks) {
        if (!t.is_primitive() || is_noop(t)) continue;
        const Operator* op = d.find_operator(t.name);
        if (!op) continue;
        auto sigma = op_binding(*op, t);
        if (!sigma) continue;
        for (const auto& p : op->pre_pos) put(t.id, sigma->apply(p));
    }
    for (const auto& c : n.network.state_constraints)
        if (c.kind == StateConstraintKind::Before) put(c.first, c.pred);
    for (const auto& l : n.links) put(l.consumer, l.predicate).producers.push_back(l.producer);
    return out;
}

}  // namespace

std::vector<Threat> detect_interactions(const RefinementNode& n, const Domain& d,
                                        const State& s0) {
    const TaskNetwork& tn = n.network;
    std::vector<Threat> deleted;
    auto seen = [&](const Threat& th) {
        return std::find(deleted.begin(), deleted.end(), th) != deleted.end();
    };
    for (const auto& c : collect_consumers(n, d)) {
        if (!tn.has_task(c.task)) continue;
        std::vector<int> producers = c.producers;
        if (producers.empty()) {
            for (const auto& f : s0.facts())
                if (unify(c.pred, f, {})) {
                    producers.push_back(kInitTask);
                    break;
                }
            for (const auto& u : tn.tasks) {
                if (u.id == c.task || tn.precedes(c.task, u.id)) continue;
                for (const auto& ap : task_effects(u, d, true))
                    if (unify(ap, c.pred, {})) {
                        producers.push_back(u.id);
                        break;
                    }
            }
        }
        for (int prod : producers) {
            for (const auto& u : tn.tasks) {
                if (u.id == c.task || u.id == prod) continue;
                if (prod != kInitTask && tn.precedes(u.id, prod)) continue;
                if (tn.precedes(c.task, u.id)) continue;
                for (const auto& dp : task_effects(u, d, false)) {
                    auto sigma = unify(dp, c.pred, {});
                    if (!sigma || violates_separation(*sigma, tn)) continue;
                    Threat th{ThreatKind::DeletedCondition, u.id, c.task, prod, c.pred};
                    if (!seen(th)) deleted.push_back(th);
                    break;
                }
            }
        }
    }

    // A mutually-deleting unordered pair is one double-cross, not two
    // deleted-condition threats.
    auto crossed = [&](const Threat& a) {
        if (tn.precedes(a.clobberer, a.victim) || tn.precedes(a.victim, a.clobberer))
            return false;
        for (const auto& b : deleted)
            if (b.clobberer == a.victim && b.victim == a.clobberer) return true;
        return false;
    };
    std::vector<Threat> out;
    std::set<std::pair<int, int>> paired;
    for (const auto& a : deleted) {
        if (!crossed(a)) continue;
        auto key = std::minmax(a.clobberer, a.victim);
        if (!paired.insert(key).second) continue;
        // Report from the side whose clobberer has the smaller id.
        Threat cr = a;
        for (const auto& b : deleted)
            if (b.clobberer == key.first && b.victim == key.second) cr = b;
        cr.kind = ThreatKind::DoubleCross;
        cr.producer = kInitTask;
        out.push_back(cr);
    }
    for (const auto& a : deleted)
        if (!crossed(a)) out.push_back(a);

    // Resource interactions: a task consuming a marked resource while an
    // unordered task references the same object. Report-only.
    std::set<std::pair<int, int>> reported;
    for (const auto& u : tn.tasks) {
        if (!u.is_primitive() || is_noop(u)) continue;
        const Operator* op = d.find_operator(u.name);
        if (!op || op->resource_params.empty()) continue;
        for (int idx : op->resource_params) {
            if (idx < 0 || idx >= static_cast<int>(u.args.size())) continue;
            const Term& res = u.args[static_cast<size_t>(idx)];
            if (!res.is_constant()) continue;
            Predicate consumed;
            bool consumes = false;
            for (const auto& dp : task_effects(u, d, false))
                for (const auto& a : dp.args)
                    if (a == res && !consumes) {
                        consumed = dp;
                        consumes = true;
                    }
            if (!consumes) continue;
            for (const auto& v : tn.tasks) {
                if (v.id == u.id || is_noop(v)) continue;
                if (tn.precedes(u.id, v.id) || tn.precedes(v.id, u.id)) continue;
                if (std::find(v.args.begin(), v.args.end(), res) == v.args.end()) continue;
                if (reported.insert({u.id, v.id}).second)
                    out.push_back({ThreatKind::Resource, u.id, v.id, kInitTask, consumed});
            }
        }
    }
    return out;
}

std::vector<RefinementNode> resolve_threat(const RefinementNode& n, const Threat& th,
                                           const Domain& d) {
    if (th.kind == ThreatKind::Resource)
        throw std::invalid_argument("resource threats are reported, not resolved");
    if (th.kind == ThreatKind::DoubleCross) return {};

    std::vector<RefinementNode> children;
    auto try_edge = [&](int a, int b) {
        if (a == kInitTask || b == kInitTask) return;
        if (n.network.precedes(b, a)) return;  // would close a cycle
        RefinementNode child = n;
        child.network.ordering.insert({a, b});
        if (propagate(child)) children.push_back(std::move(child));
    };
    try_edge(th.clobberer, th.producer);  // promotion
    try_edge(th.victim, th.clobberer);    // demotion

    // Separation: when the clash exists only under unification, a
    // not-equal constraint on the first variable involved removes it.
    const TaskInstance* u = n.network.find_task(th.clobberer);
    if (u) {
        for (const auto& dp : task_effects(*u, d, false)) {
            if (dp == th.predicate) continue;  // identical clash, not separable
            auto sigma = unify(dp, th.predicate, {});
            if (!sigma || sigma->empty()) continue;
            const auto& [var, val] = *sigma->bindings().begin();
            RefinementNode child = n;
            child.network.bindings.push_back({Term::var(var), val, false});
            if (propagate(child)) children.push_back(std::move(child));
            break;
        }
    }
    return children;
}

namespace {

void add_unifier_bindings(RefinementNode& node, const Substitution& sigma) {
    for (const auto& [var, val] : sigma.bindings())
        node.network.bindings.push_back({Term::var(var), val, true});
}

void erase_obligation(RefinementNode& node, const Obligation& c) {
    auto it = std::find(node.agenda.begin(), node.agenda.end(), c);
    if (it != node.agenda.end()) node.agenda.erase(it);
}

}  // namespace

std::vector<RefinementNode> establish(const Obligation& c, const RefinementNode& n,
                                      const Domain& d, const State& s0) {
    std::vector<RefinementNode> children;
    if (!n.network.has_task(c.task)) return children;

    for (const auto& f : s0.facts()) {
        auto sigma = unify(c.pred, f, {});
        if (!sigma || violates_separation(*sigma, n.network)) continue;
        RefinementNode child = n;
        child.links.push_back({kInitTask, c.task, c.pred});
        add_unifier_bindings(child, *sigma);
        erase_obligation(child, c);
        if (propagate(child)) children.push_back(std::move(child));
        if (c.pred.is_ground()) break;  // a ground predicate matches one fact
    }
    for (const auto& u : n.network.tasks) {
        if (u.id == c.task || is_noop(u)) continue;
        if (n.network.precedes(c.task, u.id)) continue;  // cannot come before
        for (const auto& ap : task_effects(u, d, true)) {
            auto sigma = unify(ap, c.pred, {});
            if (!sigma || violates_separation(*sigma, n.network)) continue;
            RefinementNode child = n;
            child.links.push_back({u.id, c.task, c.pred});
            child.network.ordering.insert({u.id, c.task});
            add_unifier_bindings(child, *sigma);
            erase_obligation(child, c);
            if (propagate(child)) children.push_back(std::move(child));
            break;
        }
    }
    return children;
}

bool propagate(RefinementNode& n) {
    TaskNetwork& tn = n.network;
    for (const auto& l : n.links)
        if (l.producer != kInitTask) tn.ordering.insert({l.producer, l.consumer});

    // Transitive closure of the ordering; a reflexive edge is a cycle.
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::pair<int, int>> fresh;
        for (const auto& [a, b] : tn.ordering)
            for (const auto& [c, e] : tn.ordering)
                if (b == c && !tn.ordering.count({a, e})) fresh.push_back({a, e});
        for (const auto& edge : fresh) {
            tn.ordering.insert(edge);
            grew = true;
        }
    }
    for (const auto& [a, b] : tn.ordering)
        if (a == b) return false;

    // Congruence closure of equality bindings (union-find on variables),
    // with one optional constant per class.
    std::map<std::string, std::string> parent;
    std::map<std::string, Term> constant;
    std::function<std::string(std::string)> find = [&](std::string v) {
        while (parent.count(v) && parent[v] != v) v = parent[v] = parent[parent[v]];
        if (!parent.count(v)) parent[v] = v;
        return v;
    };
    auto set_const = [&](const std::string& rep, const Term& c) {
        auto it = constant.find(rep);
        if (it != constant.end()) return it->second == c;
        constant[rep] = c;
        return true;
    };
    for (const auto& b : tn.bindings) {
        if (!b.equal) continue;
        if (b.lhs.is_constant() && b.rhs.is_constant()) {
            if (!(b.lhs == b.rhs)) return false;
        } else if (b.lhs.is_variable() && b.rhs.is_variable()) {
            std::string l = find(b.lhs.text), r = find(b.rhs.text);
            if (l == r) continue;
            parent[l] = r;
            if (constant.count(l)) {
                Term c = constant[l];
                constant.erase(l);
                if (!set_const(r, c)) return false;
            }
        } else {
            const Term& var = b.lhs.is_variable() ? b.lhs : b.rhs;
            const Term& cst = b.lhs.is_variable() ? b.rhs : b.lhs;
            if (!set_const(find(var.text), cst)) return false;
        }
    }

    // Fold classes with a decided constant into every formula.
    Substitution fold;
    auto collect_var = [&](const Term& t) {
        if (!t.is_variable()) return;
        auto it = constant.find(find(t.text));
        if (it != constant.end()) fold.bind(t.text, it->second);
    };
    for (const auto& t : tn.tasks)
        for (const auto& a : t.args) collect_var(a);
    for (const auto& b : tn.bindings) {
        collect_var(b.lhs);
        collect_var(b.rhs);
    }
    for (const auto& c : tn.state_constraints)
        for (const auto& a : c.pred.args) collect_var(a);
    for (const auto& o : n.agenda)
        for (const auto& a : o.pred.args) collect_var(a);
    for (const auto& l : n.links)
        for (const auto& a : l.predicate.args) collect_var(a);
    if (!fold.empty()) {
        tn.apply_substitution(fold);
        for (auto& o : n.agenda) o.pred = fold.apply(o.pred);
        for (auto& l : n.links) l.predicate = fold.apply(l.predicate);
    }

    // Separation constraints whose sides are now co-designated fail.
    for (const auto& b : tn.bindings) {
        if (b.equal) continue;
        Term l = b.lhs, r = b.rhs;
        if (l.is_variable() && r.is_variable() && find(l.text) == find(r.text)) return false;
        if (l.is_constant() && r.is_constant() && l == r) return false;
    }
    return true;
}

namespace {

bool network_has_compound(const TaskNetwork& tn) {
    for (const auto& t : tn.tasks)
        if (!t.is_primitive()) return true;
    return false;
}

bool some_task_deletes(const TaskNetwork& tn, const Domain& d, const Predicate& p) {
    for (const auto& t : tn.tasks)
        for (const auto& dp : task_effects(t, d, false))
            if (unify(dp, p, {})) return true;
    return false;
}

bool some_task_adds(const TaskNetwork& tn, const Domain& d, const Predicate& p) {
    for (const auto& t : tn.tasks)
        for (const auto& ap : task_effects(t, d, true))
            if (unify(ap, p, {})) return true;
    return false;
}

}  // namespace

SimplifyOutcome simplify(RefinementNode& n, const Domain& d, const State& s0) {
    // With compound tasks around, producers and deleters may still
    // appear through decomposition: nothing is decidable yet.
    if (network_has_compound(n.network)) return SimplifyOutcome::Kept;

    std::vector<StateConstraint> kept;
    for (const auto& c : n.network.state_constraints) {
        if (!c.pred.is_ground() ||
            (c.kind != StateConstraintKind::Before && c.kind != StateConstraintKind::NotBefore)) {
            kept.push_back(c);
            continue;
        }
        bool in_s0 = s0.contains(c.pred);
        bool deletable = some_task_deletes(n.network, d, c.pred);
        bool producible = some_task_adds(n.network, d, c.pred);
        if (c.kind == StateConstraintKind::Before) {
            if (in_s0 && !deletable) {
                erase_obligation(n, {c.pred, c.first});  // satisfied for good
                continue;
            }
            if (!in_s0 && !producible) return SimplifyOutcome::Pruned;
        } else {  // NotBefore
            if (!in_s0 && !producible) continue;
            if (in_s0 && !deletable) return SimplifyOutcome::Pruned;
        }
        kept.push_back(c);
    }
    n.network.state_constraints = std::move(kept);
    return SimplifyOutcome::Kept;
}

namespace {

// Recursive enumeration of topological orders, smallest task id first,
// with incremental executability pruning.
struct Lineariser {
    const TaskNetwork& tn;
    const Domain& d;
    std::vector<int> order;
    std::vector<State> states;
    std::map<int, GroundOperator> ground;  // noop tasks absent

    bool final_check() const {
        auto pos = [&](int id) {
            return std::find(order.begin(), order.end(), id) - order.begin();
        };
        for (const auto& c : tn.state_constraints) {
            if (c.kind != StateConstraintKind::Between) continue;
            long i = pos(c.first), j = pos(c.second);
            if (i >= j) return false;
            for (long k = i + 1; k <= j; ++k)
                if (!states[static_cast<size_t>(k)].contains(c.pred)) return false;
        }
        return true;
    }

    bool step_constraints_ok(int id, const State& before, const State& after) const {
        for (const auto& c : tn.state_constraints) {
            if (c.kind == StateConstraintKind::Before && c.first == id &&
                !before.contains(c.pred))
                return false;
            if (c.kind == StateConstraintKind::NotBefore && c.first == id &&
                before.contains(c.pred))
                return false;
            if (c.kind == StateConstraintKind::After && c.first == id && !after.contains(c.pred))
                return false;
        }
        return true;
    }

    bool search(std::set<int>& remaining) {
        if (remaining.empty()) return final_check();
        // Snapshot: the loop body erases and re-inserts into remaining.
        std::vector<int> candidates(remaining.begin(), remaining.end());
        for (int id : candidates) {  // ascending: std::set order
            bool available = true;
            for (int other : remaining)
                if (other != id && tn.precedes(other, id)) available = false;
            if (!available) continue;
            const State& cur = states.back();
            State next = cur;
            auto git = ground.find(id);
            if (git != ground.end()) {
                if (!applicable(git->second, cur)) continue;
                next = apply(git->second, cur);
            }
            if (!step_constraints_ok(id, cur, next)) continue;
            order.push_back(id);
            states.push_back(std::move(next));
            remaining.erase(id);
            if (search(remaining)) return true;
            remaining.insert(id);
            states.pop_back();
            order.pop_back();
        }
        return false;
    }
};

}  // namespace

std::optional<Linearisation> linearise(const TaskNetwork& tn, const Domain& d, const State& s0) {
    for (const auto& t : tn.tasks) {
        if (!t.is_primitive()) return std::nullopt;
        for (const auto& a : t.args)
            if (a.is_variable()) throw NonGroundNetwork("unbound variable " + a.text);
    }
    for (const auto& c : tn.state_constraints)
        if (!c.pred.is_ground())
            throw NonGroundNetwork("unbound variable in state constraint " +
                                   c.pred.to_string());

    Lineariser lin{tn, d, {}, {s0}, {}};
    for (const auto& t : tn.tasks) {
        if (is_noop(t)) continue;
        const Operator* op = d.find_operator(t.name);
        if (!op) return std::nullopt;
        auto sigma = op_binding(*op, t);
        if (!sigma) return std::nullopt;
        lin.ground.emplace(t.id, instantiate(*op, *sigma));
    }
    std::set<int> remaining;
    for (const auto& t : tn.tasks) remaining.insert(t.id);
    if (!lin.search(remaining)) return std::nullopt;

    Linearisation out;
    out.order = lin.order;
    out.states = lin.states;
    for (int id : lin.order) {
        auto git = lin.ground.find(id);
        if (git != lin.ground.end()) out.steps.push_back({git->second.name, git->second.args});
    }
    return out;
}

namespace {

struct PlanSearch {
    const PlanningProblem& pp;
    Budget budget;
    PlanEngineOptions opts;
    SearchStats stats;
    std::vector<SolutionNetworkInfo> solutions;
    std::vector<ThreatLogEntry> threat_log;
    bool budget_hit = false;
    bool done = false;
    IdGen ids;
    long rename_tag = 0;

    PlanSearch(const PlanningProblem& p, const Budget& b, const PlanEngineOptions& o)
        : pp(p), budget(b), opts(o), ids(p.problem.next_task_id) {}

    bool stop() const { return budget_hit || done; }

    // Operator preconditions become before-constraints plus agenda
    // obligations the moment a primitive task enters the network.
    bool compile_task_pre(RefinementNode& node, int task_id) {
        const TaskInstance* t = node.network.find_task(task_id);
        if (!t || !t->is_primitive() || is_noop(*t)) return true;
        const Operator* op = pp.domain.find_operator(t->name);
        if (!op) return false;
        auto sigma = op_binding(*op, *t);
        if (!sigma) return false;
        for (const auto& p : op->pre_pos) {
            Predicate q = sigma->apply(p);
            node.network.state_constraints.push_back(
                {StateConstraintKind::Before, q, task_id, -1});
            node.agenda.push_back({q, task_id});
        }
        for (const auto& p : op->pre_neg)
            node.network.state_constraints.push_back(
                {StateConstraintKind::NotBefore, sigma->apply(p), task_id, -1});
        return true;
    }

    void record_solution(const RefinementNode& node, const Linearisation& lin) {
        SolutionNetworkInfo info{node.network, node.links, lin.steps, node.trace};
        for (const auto& s : solutions)
            if (s.linearisation == info.linearisation && s.network.tasks == info.network.tasks)
                return;
        solutions.push_back(std::move(info));
        if (!opts.all_solutions) done = true;
    }

    void dfs(RefinementNode node) {
        if (stop()) return;
        ++stats.nodes_expanded;
        stats.max_depth = std::max<long>(stats.max_depth, node.depth);
        if (node.depth >= budget.max_depth) {
            budget_hit = true;
            return;
        }
        if (!propagate(node)) return;
        if (simplify(node, pp.domain, pp.problem.init) == SimplifyOutcome::Pruned) return;

        auto threats = detect_interactions(node, pp.domain, pp.problem.init);
        for (const auto& th : threats) {
            if (th.kind == ThreatKind::Resource)
                threat_log.push_back({th, "reported"});
        }
        for (const auto& th : threats) {
            if (th.kind == ThreatKind::DoubleCross) {
                threat_log.push_back({th, "backtracked"});
                return;  // unresolvable by ordering
            }
        }
        for (const auto& th : threats) {
            if (th.kind != ThreatKind::DeletedCondition) continue;
            auto children = resolve_threat(node, th, pp.domain);
            threat_log.push_back(
                {th, children.empty() ? "unresolvable" : "resolved (" +
                                             std::to_string(children.size()) + " options)"});
            bool first = true;
            for (auto& child : children) {
                if (stop()) return;
                if (!first) ++stats.backtracks;
                first = false;
                child.depth = node.depth + 1;
                dfs(std::move(child));
            }
            return;
        }

        if (!node.agenda.empty()) {
            Obligation c = node.agenda.front();
            auto children = establish(c, node, pp.domain, pp.problem.init);
            bool first = true;
            for (auto& child : children) {
                if (stop()) return;
                if (!first) ++stats.backtracks;
                first = false;
                child.depth = node.depth + 1;
                dfs(std::move(child));
            }
            return;
        }

        const TaskInstance* compound = nullptr;
        for (const auto& t : node.network.tasks)
            if (!t.is_primitive()) {
                compound = &t;
                break;  // tasks are id-sorted: leftmost first
            }
        if (compound) {
            expand_compound(node, *compound);
            return;
        }

        try {
            auto lin = linearise(node.network, pp.domain, pp.problem.init);
            if (lin) record_solution(node, *lin);
        } catch (const NonGroundNetwork&) {
            // Free variables left: not a solution, backtrack.
        }
    }

    void expand_compound(const RefinementNode& node, const TaskInstance t) {
        const Method* m = pp.domain.find_method(t.name);
        if (!m) return;
        for (const auto& branch : m->branches) {
            if (stop()) return;
            std::string suffix = "#d" + std::to_string(++rename_tag);
            Method renamed = rename_method(*m, branch, suffix);
            const MethodBranch& br = renamed.branches.front();

            // Filter conditions are static and checked against s0 only.
            auto seed = unify_args(renamed.params, t.args, {});
            if (!seed) continue;
            std::vector<Substitution> filters;
            if (br.filter.empty()) filters.push_back(*seed);
            else filters = satisfying_bindings(br.filter, {}, pp.problem.init, *seed);

            bool first = true;
            for (const auto& sf : filters) {
                if (stop()) return;
                if (!first) ++stats.backtracks;
                first = false;
                if (stats.decompositions >= budget.max_decompositions) {
                    budget_hit = true;
                    return;
                }
                ++stats.decompositions;
                apply_branch(node, t, renamed, br, branch.rank, sf);
            }
        }
    }

    void apply_branch(const RefinementNode& node, const TaskInstance& t, const Method& m,
                      const MethodBranch& br, int rank, const Substitution& sf) {
        MethodBranch body = br;
        body.network.apply_substitution(sf);
        if (body.network.empty()) {
            // An empty branch still needs a carrier for its conditions:
            // a do-nothing step, dropped from reported linearisations.
            TaskInstance noop{1, kNoopName, {}};
            body.network.add_task(noop);
        }

        RefinementNode child = node;
        std::vector<int> fresh;
        Substitution full;
        TaskNetwork next;
        try {
            next = decompose_po(node.network, t, sf.apply(m.params), body, ids, &fresh, &full);
        } catch (const NotApplicable&) {
            return;
        }
        child.network = std::move(next);

        // Links and pending obligations addressed to t move to the copy.
        std::vector<int> minimal_fresh;
        for (int id : fresh) {
            bool is_min = true;
            for (const auto& e : child.network.ordering)
                if (e.second == id &&
                    std::find(fresh.begin(), fresh.end(), e.first) != fresh.end())
                    is_min = false;
            if (is_min) minimal_fresh.push_back(id);
        }
        std::vector<CausalLink> moved_links;
        for (const auto& l : child.links) {
            if (l.consumer != t.id) {
                moved_links.push_back(l);
                continue;
            }
            for (int id : minimal_fresh) moved_links.push_back({l.producer, id, l.predicate});
        }
        child.links = std::move(moved_links);
        std::vector<Obligation> moved_agenda;
        for (const auto& o : child.agenda) {
            if (o.task != t.id) {
                moved_agenda.push_back(o);
                continue;
            }
            for (int id : minimal_fresh) moved_agenda.push_back({o.pred, id});
        }
        child.agenda = std::move(moved_agenda);

        // Branch preconditions hold in the state entering the subnetwork.
        int anchor = minimal_fresh.empty() ? -1 : minimal_fresh.front();
        for (const auto& p : br.pre_pos) {
            Predicate q = full.apply(sf.apply(p));
            child.network.state_constraints.push_back(
                {StateConstraintKind::Before, q, anchor, -1});
            child.agenda.push_back({q, anchor});
        }
        for (const auto& p : br.pre_neg)
            child.network.state_constraints.push_back(
                {StateConstraintKind::NotBefore, full.apply(sf.apply(p)), anchor, -1});

        for (int id : fresh)
            if (!compile_task_pre(child, id)) return;

        child.trace.push_back({t.id, t.name, full.apply(t.args), m.name, rank, full, fresh});
        child.depth = node.depth + 1;
        dfs(std::move(child));
    }

    // A copy of m restricted to one branch, with every variable of the
    // parameters and that branch suffixed for scope separation.
    static Method rename_method(const Method& m, const MethodBranch& branch,
                                const std::string& suffix) {
        auto sfx = [&](Term& term) {
            if (term.is_variable()) term = Term::var(term.text + suffix);
        };
        auto sfx_pred = [&](Predicate& p) {
            for (auto& a : p.args) sfx(a);
        };
        Method out;
        out.name = m.name;
        out.params = m.params;
        for (auto& p : out.params) sfx(p);
        MethodBranch br = branch;
        for (auto& p : br.pre_pos) sfx_pred(p);
        for (auto& p : br.pre_neg) sfx_pred(p);
        for (auto& p : br.filter) sfx_pred(p);
        for (auto& task : br.network.tasks)
            for (auto& a : task.args) sfx(a);
        for (auto& b : br.network.bindings) {
            sfx(b.lhs);
            sfx(b.rhs);
        }
        for (auto& c : br.network.state_constraints) sfx_pred(c.pred);
        out.branches.push_back(std::move(br));
        return out;
    }
};

}  // namespace

PlanSearchResult plan_po(const PlanningProblem& pp, const Budget& budget,
                         const PlanEngineOptions& opts) {
    // Filter predicates must be static for the s0-only check to be sound.
    for (const auto& m : pp.domain.methods)
        for (const auto& br : m.branches)
            for (const auto& f : br.filter)
                for (const auto& op : pp.domain.operators) {
                    auto touches = [&](const std::vector<Predicate>& eff) {
                        for (const auto& e : eff)
                            if (e.symbol == f.symbol) return true;
                        return false;
                    };
                    if (touches(op.eff_add) || touches(op.eff_del))
                        throw std::invalid_argument("filter predicate " + f.symbol +
                                                    " is affected by operator " + op.name);
                }

    PlanSearch search(pp, budget, opts);
    RefinementNode root;
    root.network = pp.problem.network;
    bool root_ok = true;
    for (const auto& t : pp.problem.network.tasks)
        if (!search.compile_task_pre(root, t.id)) root_ok = false;
    for (const auto& c : pp.problem.network.state_constraints)
        if (c.kind == StateConstraintKind::Before) root.agenda.push_back({c.pred, c.first});
    if (root_ok) search.dfs(std::move(root));

    PlanSearchResult result;
    result.stats = search.stats;
    result.threat_log = std::move(search.threat_log);
    result.complete = !search.budget_hit;
    result.solutions = std::move(search.solutions);
    if (!result.solutions.empty()) result.outcome = SearchOutcome::Solved;
    else if (search.budget_hit) result.outcome = SearchOutcome::BudgetExhausted;
    else result.outcome = SearchOutcome::NoSolution;
    return result;
}

}  // namespace htn
