#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "htn/core.hpp"
#include "test_util.hpp"

using namespace htn;
using testutil::load_domain;
using testutil::load_problem;

namespace {

Predicate pred(const std::string& sym, std::vector<std::string> args) {
    Predicate p{sym, {}};
    for (auto& a : args) p.args.push_back(Term{a});
    return p;
}

GroundOperator ground_op(const Domain& d, const std::string& name,
                         std::vector<std::string> args) {
    const Operator* op = d.find_operator(name);
    REQUIRE(op != nullptr);
    REQUIRE(op->params.size() == args.size());
    Substitution sigma;
    for (size_t i = 0; i < args.size(); ++i) sigma.bind(op->params[i].text, Term::cst(args[i]));
    return instantiate(*op, sigma);
}

}  // namespace

TEST_CASE("terms and substitutions") {
    CHECK(Term::var("?x").is_variable());
    CHECK(Term::cst("l1").is_constant());

    Substitution sigma;
    CHECK(sigma.bind("?x", Term::cst("a")));
    CHECK(sigma.bind("?x", Term::cst("a")));        // same binding is fine
    CHECK_FALSE(sigma.bind("?x", Term::cst("b")));  // clash

    // Normalization: binding through a chain stays idempotent.
    Substitution chain;
    CHECK(chain.bind("?x", Term::var("?y")));
    CHECK(chain.bind("?y", Term::cst("c")));
    Predicate p = pred("p", {"?x", "?y"});
    CHECK(chain.apply(p) == chain.apply(chain.apply(p)));
    CHECK(chain.apply(Term::var("?x")) == Term::cst("c"));
}

TEST_CASE("ground substitutes bound variables only") {
    Substitution sigma;
    sigma.bind("?b", Term::cst("b1"));
    sigma.bind("?l", Term::cst("l1"));
    CHECK(ground(pred("box-at", {"?b", "?l"}), sigma) == pred("box-at", {"b1", "l1"}));
    CHECK(ground(pred("box-at", {"b1", "l1"}), {}) == pred("box-at", {"b1", "l1"}));

    Substitution partial;
    partial.bind("?x", Term::cst("a"));
    CHECK(ground(pred("on", {"?x", "?y"}), partial) == pred("on", {"a", "?y"}));
}

TEST_CASE("state has set semantics with stable fact order") {
    State s;
    CHECK(s.add(pred("p", {"a"})));
    CHECK(s.add(pred("p", {"b"})));
    CHECK_FALSE(s.add(pred("p", {"a"})));  // duplicate
    CHECK(s.size() == 2);
    CHECK(s.contains(pred("p", {"b"})));
    s.remove(pred("p", {"a"}));
    CHECK_FALSE(s.contains(pred("p", {"a"})));

    State t;
    t.add(pred("p", {"b"}));
    CHECK(s == t);  // equality ignores insertion order / history
}

TEST_CASE("unify") {
    auto u = unify(pred("at", {"?x", "l1"}), pred("at", {"t1", "?y"}), {});
    REQUIRE(u.has_value());
    CHECK(u->apply(Term::var("?x")) == Term::cst("t1"));
    CHECK(u->apply(Term::var("?y")) == Term::cst("l1"));
    CHECK_FALSE(unify(pred("at", {"a"}), pred("at", {"b"}), {}).has_value());
    CHECK_FALSE(unify(pred("at", {"a"}), pred("on", {"a"}), {}).has_value());
    CHECK_FALSE(unify_args({Term::cst("a")}, {Term::cst("a"), Term::cst("b")}, {}).has_value());
}

TEST_CASE("applicable and apply on the logistics drive operator") {
    Domain d = load_domain("logistics.htd");
    auto drive = ground_op(d, "!drive", {"t1", "l1", "l2"});

    State s;
    s.add(pred("truck-at", {"t1", "l1"}));
    s.add(pred("adjacent", {"l1", "l2"}));
    CHECK(applicable(drive, s));

    State s2 = apply(drive, s);
    CHECK(s2.contains(pred("truck-at", {"t1", "l2"})));
    CHECK_FALSE(s2.contains(pred("truck-at", {"t1", "l1"})));
    CHECK(s.contains(pred("truck-at", {"t1", "l1"})));  // value semantics

    // Groundedness is preserved and the effect sets hold afterwards.
    for (const auto& f : s2.facts()) CHECK(f.is_ground());
    for (const auto& a : drive.eff_add) CHECK(s2.contains(a));
    for (const auto& del : drive.eff_del) CHECK_FALSE(s2.contains(del));

    State wrong;
    wrong.add(pred("truck-at", {"t1", "l2"}));
    CHECK_FALSE(applicable(drive, wrong));
    CHECK_THROWS_AS(apply(drive, wrong), NotApplicable);
}

TEST_CASE("operator with empty conditions and effects") {
    GroundOperator noop{"!noop", {}, {}, {}, {}, {}, {}, {}};
    State s;
    s.add(pred("p", {"a"}));
    CHECK(applicable(noop, s));
    CHECK(apply(noop, s) == s);
}

TEST_CASE("instantiate rejects unbound parameters") {
    Domain d = load_domain("logistics.htd");
    const Operator* op = d.find_operator("!drive");
    Substitution partial;
    partial.bind("?t", Term::cst("t1"));
    CHECK_THROWS(instantiate(*op, partial));
}

TEST_CASE("executable replays the running-example plan") {
    auto pp = load_problem("logistics.htd", "fig1.htp");
    auto step = [&](const std::string& n, std::vector<std::string> a) {
        return ground_op(pp.domain, n, std::move(a));
    };
    std::vector<GroundOperator> seq = {
        step("!load-truck", {"b", "t", "l1"}), step("!drive", {"t", "l1", "l2"}),
        step("!unload-truck", {"b", "t", "l2"}), step("!load-plane", {"b", "p", "l2"}),
        step("!fly", {"p", "l2", "l4"}), step("!unload-plane", {"b", "p", "l4"})};

    auto trace = executable(seq, pp.problem.init);
    CHECK(trace.ok());
    REQUIRE(trace.states.size() == 7);
    CHECK(trace.states.back().contains(pred("box-at", {"b", "l4"})));

    // Swapping drive and unload-truck breaks at the unload step.
    std::swap(seq[1], seq[2]);
    auto bad = executable(seq, pp.problem.init);
    CHECK_FALSE(bad.ok());
    CHECK(bad.failure_index == 1);

    auto empty = executable({}, pp.problem.init);
    CHECK(empty.ok());
    REQUIRE(empty.states.size() == 1);
    CHECK(empty.states[0] == pp.problem.init);
}

TEST_CASE("satisfying_bindings enumerates deterministically") {
    State s;
    s.add(pred("box-at", {"b1", "l1"}));
    s.add(pred("box-at", {"b2", "l1"}));

    auto subs = satisfying_bindings({pred("box-at", {"?b", "l1"})}, {}, s);
    REQUIRE(subs.size() == 2);
    CHECK(subs[0].apply(Term::var("?b")) == Term::cst("b1"));
    CHECK(subs[1].apply(Term::var("?b")) == Term::cst("b2"));
    CHECK(subs == satisfying_bindings({pred("box-at", {"?b", "l1"})}, {}, s));

    auto empty_pre = satisfying_bindings({}, {}, s);
    REQUIRE(empty_pre.size() == 1);
    CHECK(empty_pre[0].empty());

    CHECK(satisfying_bindings({pred("truck-at", {"?t", "l9"})}, {}, s).empty());

    // Negative side filters candidates whose grounding matches a fact.
    s.add(pred("box-at", {"b2", "l2"}));
    auto neg = satisfying_bindings({pred("box-at", {"?b", "l1"})},
                                   {pred("box-at", {"?b", "l2"})}, s);
    REQUIRE(neg.size() == 1);
    CHECK(neg[0].apply(Term::var("?b")) == Term::cst("b1"));
    Substitution seed;
    seed.bind("?b", Term::cst("b2"));
    auto seeded = satisfying_bindings({pred("box-at", {"?b", "?l"})}, {}, s, seed);
    REQUIRE(seeded.size() == 2);  // only b2's facts match the seed
    CHECK(seeded[0].apply(Term::var("?l")) == Term::cst("l1"));
    CHECK(seeded[1].apply(Term::var("?l")) == Term::cst("l2"));
    for (const auto& sub : seeded) CHECK(sub.apply(Term::var("?b")) == Term::cst("b2"));
}

TEST_CASE("rename_fresh yields an isomorphic copy") {
    TaskNetwork tn;
    tn.add_task({1, "t-prime", {Term::cst("a")}});
    tn.add_task({2, "t-second", {}});
    tn.add_task({3, "t-prime", {Term::cst("a")}});
    tn.ordering.insert({1, 2});
    tn.ordering.insert({2, 3});
    tn.state_constraints.push_back({StateConstraintKind::Before, pred("p", {"a"}), 2, -1});

    IdGen ids(10);
    TaskNetwork copy = rename_fresh(tn, ids);
    REQUIRE(copy.tasks.size() == 3);
    for (const auto& t : copy.tasks) CHECK(t.id >= 10);
    // Same label multiset, same shape under the id bijection (old order
    // position i maps to new position i since both stay id-sorted).
    std::multiset<std::string> a, b;
    for (const auto& t : tn.tasks) a.insert(t.name);
    for (const auto& t : copy.tasks) b.insert(t.name);
    CHECK(a == b);
    CHECK(copy.ordering.size() == tn.ordering.size());
    CHECK(copy.precedes(copy.tasks[0].id, copy.tasks[1].id));
    CHECK(copy.precedes(copy.tasks[1].id, copy.tasks[2].id));
    REQUIRE(copy.state_constraints.size() == 1);
    CHECK(copy.state_constraints[0].first == copy.tasks[1].id);

    CHECK(rename_fresh(TaskNetwork{}, ids).empty());
    // Renaming twice stays isomorphic to the original.
    TaskNetwork twice = rename_fresh(copy, ids);
    std::multiset<std::string> c;
    for (const auto& t : twice.tasks) c.insert(t.name);
    CHECK(c == a);
    CHECK(twice.totally_ordered() == tn.totally_ordered());
}

TEST_CASE("network queries") {
    TaskNetwork tn;
    tn.add_task({1, "a", {}});
    tn.add_task({2, "b", {}});
    tn.add_task({3, "c", {}});
    tn.ordering.insert({1, 3});
    tn.ordering.insert({2, 3});
    CHECK(tn.minimal_tasks() == std::vector<int>{1, 2});
    CHECK(tn.precedes(1, 3));
    CHECK_FALSE(tn.precedes(1, 2));
    CHECK_FALSE(tn.totally_ordered());
    CHECK(tn.ordering_acyclic());
    tn.ordering.insert({1, 2});
    CHECK(tn.totally_ordered());
    CHECK(tn.total_order() == std::vector<int>{1, 2, 3});
}

TEST_CASE("decompose_state replaces the task and inherits ordering") {
    auto pp = load_problem("logistics.htd", "fig1.htp");
    const Method* deliver = pp.domain.find_method("deliver");
    REQUIRE(deliver != nullptr);
    REQUIRE(deliver->branches.size() == 3);

    const TaskInstance& task = pp.problem.network.tasks[0];  // deliver(b, l1, l4)
    Substitution sigma;
    REQUIRE(unify_args(deliver->params, task.args, {}).has_value());
    sigma = *unify_args(deliver->params, task.args, {});

    SUBCASE("way 2 expands to the truck hop plus a recursive tail") {
        const MethodBranch& way2 = deliver->branches[1];
        auto subs = satisfying_bindings(way2.pre_pos, way2.pre_neg, pp.problem.init, sigma);
        REQUIRE(subs.size() == 1);
        IdGen ids(pp.problem.next_task_id);
        std::vector<int> fresh;
        State before = pp.problem.init;
        TaskNetwork tn =
            decompose_state(pp.problem.init, pp.problem.network, task, way2, subs[0], ids, &fresh);
        CHECK(pp.problem.init == before);  // decomposition is a state self-transition
        REQUIRE(tn.tasks.size() == 4);
        CHECK(tn.totally_ordered());
        std::vector<int> order = tn.total_order();
        auto name_of = [&](int i) { return tn.find_task(order[i])->name; };
        CHECK(name_of(0) == "!load-truck");
        CHECK(name_of(1) == "!drive");
        CHECK(name_of(2) == "!unload-truck");
        CHECK(name_of(3) == "deliver");
        CHECK(tn.find_task(order[3])->args ==
              std::vector<Term>{Term::cst("b"), Term::cst("l2"), Term::cst("l4")});
        CHECK(tn.find_task(order[1])->args ==
              std::vector<Term>{Term::cst("t"), Term::cst("l1"), Term::cst("l2")});
        CHECK(fresh.size() == 4);
    }

    SUBCASE("way 3 removes the task without adding anything") {
        auto done = load_problem("logistics.htd", "fig1_done.htp");
        const TaskInstance& t3 = done.problem.network.tasks[0];
        Substitution s3 = *unify_args(deliver->params, t3.args, {});
        IdGen ids(done.problem.next_task_id);
        TaskNetwork tn = decompose_state(done.problem.init, done.problem.network, t3,
                                         deliver->branches[2], s3, ids, nullptr);
        CHECK(tn.empty());
    }

    SUBCASE("way 1 without a plane at the source is not applicable") {
        IdGen ids(pp.problem.next_task_id);
        CHECK_THROWS_AS(decompose_state(pp.problem.init, pp.problem.network, task,
                                        deliver->branches[0], sigma, ids, nullptr),
                        NotApplicable);
    }

    SUBCASE("surviving tasks and their mutual ordering are untouched") {
        TaskNetwork two = pp.problem.network;
        TaskInstance extra{7, "deliver", task.args};
        two.add_task(extra);
        two.ordering.insert({task.id, 7});
        const MethodBranch& way2 = deliver->branches[1];
        auto subs = satisfying_bindings(way2.pre_pos, way2.pre_neg, pp.problem.init, sigma);
        IdGen ids(8);
        std::vector<int> fresh;
        TaskNetwork tn = decompose_state(pp.problem.init, two, task, way2, subs[0], ids, &fresh);
        CHECK(tn.has_task(7));
        CHECK(*tn.find_task(7) == extra);
        for (int f : fresh) CHECK(tn.precedes(f, 7));  // successors inherited onto the copy
        // TOTD closure: total + total stays total.
        CHECK(tn.totally_ordered());
    }
}

TEST_CASE("decompose_po inherits constraints onto the copy") {
    Method m;
    m.name = "c";
    MethodBranch br;
    br.rank = 1;
    br.network.add_task({1, "!a", {}});
    br.network.add_task({2, "!b", {}});
    m.branches.push_back(br);

    TaskNetwork tn;
    tn.add_task({1, "!u", {}});
    tn.add_task({2, "c", {}});
    tn.add_task({3, "!w", {}});
    tn.ordering.insert({1, 2});
    tn.ordering.insert({2, 3});
    tn.state_constraints.push_back({StateConstraintKind::Before, pred("p", {}), 2, -1});
    tn.state_constraints.push_back({StateConstraintKind::After, pred("q", {}), 2, -1});

    IdGen ids(4);
    std::vector<int> fresh;
    TaskNetwork out = decompose_po(tn, *tn.find_task(2), m.params, m.branches[0], ids, &fresh);
    REQUIRE(fresh.size() == 2);
    CHECK_FALSE(out.has_task(2));
    for (int f : fresh) {
        CHECK(out.precedes(1, f));  // predecessor inherited onto all of the copy
        CHECK(out.precedes(f, 3));  // successor likewise
    }
    // before(p, t) lands on the copy's minimal tasks, after(t, q) on its
    // maximal ones; here both tasks are unordered so both qualify.
    int befores = 0, afters = 0;
    for (const auto& sc : out.state_constraints) {
        if (sc.kind == StateConstraintKind::Before) ++befores;
        if (sc.kind == StateConstraintKind::After) ++afters;
    }
    CHECK(befores == 2);
    CHECK(afters == 2);

    SUBCASE("no incident constraints means plain replacement") {
        TaskNetwork lone;
        lone.add_task({2, "c", {}});
        IdGen ids2(3);
        TaskNetwork out2 = decompose_po(lone, *lone.find_task(2), m.params, m.branches[0], ids2);
        CHECK(out2.tasks.size() == 2);
        CHECK(out2.ordering.empty());
        CHECK(out2.state_constraints.empty());
    }

    SUBCASE("head arguments unify into the copy") {
        Method md;
        md.name = "d";
        md.params = {Term::var("?x")};
        MethodBranch b2;
        b2.rank = 1;
        b2.network.add_task({1, "!a", {Term::var("?x")}});
        md.branches.push_back(b2);
        TaskNetwork tn2;
        tn2.add_task({1, "d", {Term::cst("k")}});
        IdGen ids3(2);
        Substitution full;
        TaskNetwork out3 =
            decompose_po(tn2, *tn2.find_task(1), md.params, md.branches[0], ids3, nullptr, &full);
        REQUIRE(out3.tasks.size() == 1);
        CHECK(out3.tasks[0].args == std::vector<Term>{Term::cst("k")});
        CHECK(full.apply(Term::var("?x")) == Term::cst("k"));
    }

    SUBCASE("argument clash raises") {
        Method md;
        md.name = "c";
        md.params = {Term::cst("a")};
        TaskNetwork tn2;
        tn2.add_task({1, "c", {Term::cst("b")}});
        IdGen ids3(2);
        CHECK_THROWS(decompose_po(tn2, *tn2.find_task(1), md.params, br, ids3));
    }
}
