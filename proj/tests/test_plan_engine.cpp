#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "htn/core.hpp"
#include "htn/plan_engine.hpp"
#include "test_util.hpp"

using namespace htn;
using testutil::load_problem;

namespace {

Predicate pred(const std::string& sym, std::vector<std::string> args) {
    Predicate p{sym, {}};
    for (auto& a : args) p.args.push_back(Term{a});
    return p;
}

RefinementNode node_of(const PlanningProblem& pp) {
    RefinementNode n;
    n.network = pp.problem.network;
    return n;
}

}  // namespace

TEST_CASE("deleted-condition interaction on the partially ordered drive pair") {
    auto pp = load_problem("logistics.htd", "fig3a.htp");
    RefinementNode n = node_of(pp);

    auto threats = detect_interactions(n, pp.domain, pp.problem.init);
    REQUIRE(threats.size() == 1);
    const Threat& th = threats[0];
    CHECK(th.kind == ThreatKind::DeletedCondition);
    CHECK(th.clobberer == 4);  // !drive t1 l2 l3
    CHECK(th.victim == 3);     // !unload-truck b1 t1 l2
    CHECK(th.producer == 2);   // !drive t1 l1 l2
    CHECK(th.predicate == pred("truck-at", {"t1", "l2"}));

    auto children = resolve_threat(n, th, pp.domain);
    REQUIRE(children.size() == 1);  // promotion would cycle; demotion survives
    const RefinementNode& fixed = children[0];
    CHECK(fixed.network.precedes(3, 4));  // unload before the second drive
    CHECK(fixed.network.totally_ordered());

    // The resolved network is conflict-free and replays.
    CHECK(detect_interactions(fixed, pp.domain, pp.problem.init).empty());
    auto lin = linearise(fixed.network, pp.domain, pp.problem.init);
    REQUIRE(lin.has_value());
    CHECK(lin->order == std::vector<int>{1, 2, 3, 4});
    CHECK(lin->steps.size() == 4);
    CHECK(lin->states.size() == 5);
}

TEST_CASE("double-cross interaction forces backtracking") {
    auto pp = load_problem("interactions.htd", "fig3b.htp");
    RefinementNode n = node_of(pp);

    auto threats = detect_interactions(n, pp.domain, pp.problem.init);
    REQUIRE(threats.size() == 1);
    CHECK(threats[0].kind == ThreatKind::DoubleCross);
    CHECK(threats[0].predicate.symbol == "in-truck");
    CHECK(resolve_threat(n, threats[0], pp.domain).empty());

    auto res = plan_po(pp, pp.problem.budget);
    CHECK(res.outcome == SearchOutcome::NoSolution);
    bool logged = false;
    for (const auto& e : res.threat_log)
        if (e.threat.kind == ThreatKind::DoubleCross) logged = true;
    CHECK(logged);
}

TEST_CASE("resource threats are reported upstream, not resolved") {
    RefinementNode n;
    Threat th;
    th.kind = ThreatKind::Resource;
    Domain d;
    CHECK_THROWS_AS(resolve_threat(n, th, d), std::invalid_argument);
}

TEST_CASE("establish") {
    auto pp = load_problem("logistics.htd", "fig3a.htp");

    SUBCASE("task producer: drive establishes truck-at for the unload") {
        RefinementNode n = node_of(pp);
        Obligation c{pred("truck-at", {"t1", "l2"}), 3};
        n.agenda.push_back(c);
        auto kids = establish(c, n, pp.domain, pp.problem.init);
        REQUIRE(kids.size() == 1);
        REQUIRE(kids[0].links.size() == 1);
        CHECK(kids[0].links[0].producer == 2);
        CHECK(kids[0].links[0].consumer == 3);
        CHECK(kids[0].links[0].predicate == c.pred);
        CHECK(kids[0].network.precedes(2, 3));
        CHECK(kids[0].agenda.empty());  // obligation discharged
    }

    SUBCASE("initial-state fact with no producing task links to INIT") {
        RefinementNode n = node_of(pp);
        Obligation c{pred("box-at", {"b1", "l1"}), 1};
        n.agenda.push_back(c);
        auto kids = establish(c, n, pp.domain, pp.problem.init);
        REQUIRE(kids.size() == 1);
        CHECK(kids[0].links[0].producer == kInitTask);
        CHECK(kids[0].links[0].consumer == 1);
    }

    SUBCASE("two candidate producers yield two children in id order") {
        RefinementNode n;
        n.network.add_task({1, "!drive", {Term::cst("t1"), Term::cst("l1"), Term::cst("l2")}});
        n.network.add_task({2, "!drive", {Term::cst("t2"), Term::cst("l1"), Term::cst("l2")}});
        n.network.add_task({3, "!unload-truck",
                            {Term::cst("b1"), Term::var("?t"), Term::cst("l2")}});
        Obligation c{{"truck-at", {Term::var("?t"), Term::cst("l2")}}, 3};
        n.agenda.push_back(c);
        State s0;  // nothing at l2 initially
        auto kids = establish(c, n, pp.domain, s0);
        REQUIRE(kids.size() == 2);
        CHECK(kids[0].links[0].producer == 1);
        CHECK(kids[1].links[0].producer == 2);
        // Each child fixes ?t via the unifying binding constraint.
        for (const auto& k : kids) CHECK_FALSE(k.network.bindings.empty());
    }

    SUBCASE("no candidate at all is a dead end") {
        RefinementNode n = node_of(pp);
        Obligation c{pred("plane-at", {"p9", "l1"}), 1};
        n.agenda.push_back(c);
        CHECK(establish(c, n, pp.domain, pp.problem.init).empty());
    }
}

TEST_CASE("propagate") {
    SUBCASE("orders close under transitivity") {
        RefinementNode n;
        n.network.add_task({1, "!a", {}});
        n.network.add_task({2, "!b", {}});
        n.network.add_task({3, "!c", {}});
        n.network.ordering.insert({1, 2});
        n.network.ordering.insert({2, 3});
        CHECK(propagate(n));
        CHECK(n.network.ordering.count({1, 3}) == 1);

        RefinementNode snapshot = n;
        CHECK(propagate(n));  // idempotent
        CHECK(n.network.ordering == snapshot.network.ordering);
        CHECK(n.network.bindings.size() == snapshot.network.bindings.size());
    }

    SUBCASE("binding congruence folds decided constants into arguments") {
        RefinementNode n;
        n.network.add_task({1, "!a", {Term::var("?x")}});
        n.network.bindings.push_back({Term::var("?x"), Term::var("?y"), true});
        n.network.bindings.push_back({Term::var("?y"), Term::cst("k"), true});
        CHECK(propagate(n));
        CHECK(n.network.tasks[0].args == std::vector<Term>{Term::cst("k")});
    }

    SUBCASE("equality chain clashing with a separation is inconsistent") {
        RefinementNode n;
        n.network.bindings.push_back({Term::var("?x"), Term::var("?y"), true});
        n.network.bindings.push_back({Term::var("?y"), Term::cst("c1"), true});
        n.network.bindings.push_back({Term::var("?x"), Term::cst("c1"), false});
        CHECK_FALSE(propagate(n));
    }

    SUBCASE("ordering cycles are inconsistent") {
        RefinementNode n;
        n.network.add_task({1, "!a", {}});
        n.network.add_task({2, "!b", {}});
        n.network.ordering.insert({1, 2});
        n.network.ordering.insert({2, 1});
        CHECK_FALSE(propagate(n));
    }

    SUBCASE("links imply ordering") {
        RefinementNode n;
        n.network.add_task({1, "!a", {}});
        n.network.add_task({2, "!b", {}});
        n.links.push_back({1, 2, pred("p", {})});
        CHECK(propagate(n));
        CHECK(n.network.precedes(1, 2));
    }
}

TEST_CASE("simplify") {
    auto pp = load_problem("logistics.htd", "fig3a.htp");

    SUBCASE("kept verbatim while a compound task remains") {
        RefinementNode n;
        n.network.add_task({1, "deliver", {Term::cst("b1"), Term::cst("l1"), Term::cst("l2")}});
        n.network.state_constraints.push_back(
            {StateConstraintKind::Before, pred("box-at", {"b1", "l1"}), 1, -1});
        CHECK(simplify(n, pp.domain, pp.problem.init) == SimplifyOutcome::Kept);
        CHECK(n.network.state_constraints.size() == 1);
    }

    SUBCASE("before removed when the fact holds initially and nothing deletes it") {
        RefinementNode n = node_of(pp);
        n.network.state_constraints.push_back(
            {StateConstraintKind::Before, pred("adjacent", {"l1", "l2"}), 3, -1});
        CHECK(simplify(n, pp.domain, pp.problem.init) == SimplifyOutcome::Kept);
        CHECK(n.network.state_constraints.empty());
    }

    SUBCASE("before pruned when absent initially with no producer") {
        RefinementNode n = node_of(pp);
        n.network.state_constraints.push_back(
            {StateConstraintKind::Before, pred("plane-at", {"p9", "l1"}), 1, -1});
        CHECK(simplify(n, pp.domain, pp.problem.init) == SimplifyOutcome::Pruned);
    }

    SUBCASE("not-before pruned when the fact holds and nothing deletes it") {
        RefinementNode n = node_of(pp);
        n.network.state_constraints.push_back(
            {StateConstraintKind::NotBefore, pred("adjacent", {"l1", "l2"}), 3, -1});
        CHECK(simplify(n, pp.domain, pp.problem.init) == SimplifyOutcome::Pruned);
    }
}

TEST_CASE("linearise") {
    auto pp = load_problem("logistics.htd", "fig3a.htp");

    SUBCASE("smallest-id topological order is tried first") {
        RefinementNode n;
        n.network.add_task({1, "!drive", {Term::cst("t1"), Term::cst("l1"), Term::cst("l2")}});
        n.network.add_task({2, "!drive", {Term::cst("t2"), Term::cst("l1"), Term::cst("l2")}});
        State s0;
        s0.add(pred("truck-at", {"t1", "l1"}));
        s0.add(pred("truck-at", {"t2", "l1"}));
        s0.add(pred("adjacent", {"l1", "l2"}));
        auto lin = linearise(n.network, pp.domain, s0);
        REQUIRE(lin.has_value());
        CHECK(lin->order == std::vector<int>{1, 2});  // both work; lowest id wins
    }

    SUBCASE("backtracks over inexecutable prefixes") {
        // Partial order leaves the second drive floating; the id-first
        // order happens to be executable, so it is chosen.
        auto lin = linearise(pp.problem.network, pp.domain, pp.problem.init);
        REQUIRE(lin.has_value());
        CHECK(lin->order == std::vector<int>{1, 2, 3, 4});
    }

    SUBCASE("forcing the clobberer first leaves no executable order") {
        TaskNetwork tn = pp.problem.network;
        tn.ordering.insert({4, 3});  // drive l2->l3 before the unload
        CHECK_FALSE(linearise(tn, pp.domain, pp.problem.init).has_value());
    }

    SUBCASE("state constraints restrict the accepted orders") {
        TaskNetwork tn = pp.problem.network;
        // Demand the truck still be at l2 just before the second drive:
        // satisfied by the id-first order (unload does not move it).
        tn.state_constraints.push_back(
            {StateConstraintKind::Before, pred("truck-at", {"t1", "l2"}), 4, -1});
        auto lin = linearise(tn, pp.domain, pp.problem.init);
        REQUIRE(lin.has_value());
        // Now demand the box already be at l2 before the second drive:
        // only orders with the unload before the drive qualify.
        tn.state_constraints.push_back(
            {StateConstraintKind::Before, pred("box-at", {"b1", "l2"}), 4, -1});
        auto lin2 = linearise(tn, pp.domain, pp.problem.init);
        REQUIRE(lin2.has_value());
        CHECK(lin2->order == std::vector<int>{1, 2, 3, 4});
    }

    SUBCASE("free variables are a hard error") {
        TaskNetwork tn;
        tn.add_task({1, "!drive", {Term::var("?t"), Term::cst("l1"), Term::cst("l2")}});
        CHECK_THROWS_AS(linearise(tn, pp.domain, pp.problem.init), NonGroundNetwork);
    }
}

TEST_CASE("plan_po end to end") {
    SUBCASE("fig1 solved through plan-space refinement") {
        auto pp = load_problem("logistics.htd", "fig1.htp");
        pp.problem.engine = Engine::Plan;
        auto res = plan_po(pp, pp.problem.budget);
        REQUIRE(res.outcome == SearchOutcome::Solved);
        REQUIRE(res.solutions.size() == 1);
        const SolutionNetworkInfo& sol = res.solutions[0];

        std::vector<std::string> names;
        for (const auto& s : sol.linearisation) names.push_back(s.name);
        CHECK(names == std::vector<std::string>{"!load-truck", "!drive", "!unload-truck",
                                                "!load-plane", "!fly", "!unload-plane"});

        // Solution invariants: primitive, threat-free, executable.
        RefinementNode check;
        check.network = sol.network;
        check.links = sol.links;
        CHECK(detect_interactions(check, pp.domain, pp.problem.init).empty());
        std::vector<GroundOperator> seq;
        for (const auto& s : sol.linearisation) {
            const Operator* op = pp.domain.find_operator(s.name);
            REQUIRE(op != nullptr);
            Substitution sigma;
            for (size_t i = 0; i < s.args.size(); ++i) sigma.bind(op->params[i].text, s.args[i]);
            seq.push_back(instantiate(*op, sigma));
        }
        CHECK(executable(seq, pp.problem.init).ok());
    }

    SUBCASE("a primitive executable tn_0 needs no decomposition") {
        auto pp = load_problem("logistics.htd", "fig3a.htp");
        auto res = plan_po(pp, pp.problem.budget);
        REQUIRE(res.outcome == SearchOutcome::Solved);
        CHECK(res.stats.decompositions == 0);
        CHECK(res.solutions[0].network.tasks.size() == 4);
        REQUIRE(res.threat_log.size() == 1);  // the fig3a threat, resolved
        CHECK(res.threat_log[0].threat.kind == ThreatKind::DeletedCondition);
        CHECK(res.threat_log[0].action.find("resolved") != std::string::npos);
    }

    SUBCASE("a compound task with no matching method is unsolvable") {
        auto pp = load_problem("logistics.htd", "fig1.htp");
        pp.problem.engine = Engine::Plan;
        pp.domain.methods.clear();
        auto res = plan_po(pp, pp.problem.budget);
        CHECK(res.outcome == SearchOutcome::NoSolution);
    }

    SUBCASE("budget exhaustion is reported distinctly") {
        auto pp = load_problem("logistics.htd", "fig1.htp");
        pp.problem.engine = Engine::Plan;
        Budget tiny;
        tiny.max_decompositions = 1;
        auto res = plan_po(pp, tiny);
        CHECK(res.outcome == SearchOutcome::BudgetExhausted);
        CHECK_FALSE(res.complete);
    }
}
