#include <map>
#include <sstream>

#include "htn/domain_io.hpp"

namespace htn {

namespace {

void print_pred(std::ostream& os, const Predicate& p) {
    os << "(" << p.symbol;
    for (const auto& a : p.args) os << " " << a.text;
    os << ")";
}

void print_literals(std::ostream& os, const std::string& kw,
                    const std::vector<Predicate>& pos, const std::vector<Predicate>& neg,
                    const std::string& indent) {
    if (pos.empty() && neg.empty()) return;
    os << indent << "(" << kw;
    for (const auto& p : pos) {
        os << " ";
        print_pred(os, p);
    }
    for (const auto& p : neg) {
        os << " (not ";
        print_pred(os, p);
        os << ")";
    }
    os << ")\n";
}

void print_predlist(std::ostream& os, const std::string& kw, const std::vector<Predicate>& ps,
                    const std::string& indent) {
    print_literals(os, kw, ps, {}, indent);
}

void print_network(std::ostream& os, const TaskNetwork& tn, const std::string& indent) {
    // Labels are positional (tasks stay id-sorted), so the printed form
    // is independent of the absolute ids and printing is a fixed point
    // of parse followed by print.
    std::map<int, std::string> names;
    for (const auto& t : tn.tasks) names[t.id] = "t" + std::to_string(names.size() + 1);
    auto label = [&](int id) { return names.at(id); };
    os << indent << "(:network";
    if (tn.empty() && tn.ordering.empty() && tn.bindings.empty() &&
        tn.state_constraints.empty()) {
        os << " (:tasks))\n";
        return;
    }
    os << "\n" << indent << "  (:tasks";
    for (const auto& t : tn.tasks) {
        os << " (" << label(t.id) << " (" << t.name;
        for (const auto& a : t.args) os << " " << a.text;
        os << "))";
    }
    os << ")";
    if (!tn.ordering.empty()) {
        os << "\n" << indent << "  (:order";
        for (const auto& [a, b] : tn.ordering) os << " (" << label(a) << " " << label(b) << ")";
        os << ")";
    }
    for (const auto& c : tn.state_constraints) {
        os << "\n" << indent << "  ";
        switch (c.kind) {
            case StateConstraintKind::Before:
                os << "(:before ";
                print_pred(os, c.pred);
                os << " " << label(c.first) << ")";
                break;
            case StateConstraintKind::NotBefore:
                os << "(:not-before ";
                print_pred(os, c.pred);
                os << " " << label(c.first) << ")";
                break;
            case StateConstraintKind::After:
                os << "(:after " << label(c.first) << " ";
                print_pred(os, c.pred);
                os << ")";
                break;
            case StateConstraintKind::Between:
                os << "(:between " << label(c.first) << " ";
                print_pred(os, c.pred);
                os << " " << label(c.second) << ")";
                break;
        }
    }
    if (!tn.bindings.empty()) {
        os << "\n" << indent << "  (:bind";
        for (const auto& b : tn.bindings)
            os << " (" << (b.equal ? "=" : "!=") << " " << b.lhs.text << " " << b.rhs.text << ")";
        os << ")";
    }
    os << ")\n";
}

}  // namespace

std::string print_domain(const Domain& d) {
    std::ostringstream os;
    os << "(define (domain " << d.name << ")\n";
    if (!d.predicates.empty()) {
        os << "  (:predicates";
        for (const auto& p : d.predicates) {
            os << " (" << p.symbol;
            for (int i = 0; i < p.arity; ++i) os << " ?x" << (i + 1);
            os << ")";
        }
        os << ")\n";
    }
    for (const auto& op : d.operators) {
        os << "  (:operator (" << op.name;
        for (const auto& p : op.params) os << " " << p.text;
        os << ")\n";
        print_literals(os, ":pre", op.pre_pos, op.pre_neg, "    ");
        print_predlist(os, ":del", op.eff_del, "    ");
        print_predlist(os, ":add", op.eff_add, "    ");
        print_predlist(os, ":protect", op.protect_add, "    ");
        print_predlist(os, ":cancel", op.protect_cancel, "    ");
        if (!op.resource_params.empty()) {
            os << "    (:resources";
            for (int i : op.resource_params) os << " " << op.params[i].text;
            os << ")\n";
        }
        os << "  )\n";
    }
    for (const auto& m : d.methods) {
        os << "  (:method (" << m.name;
        for (const auto& p : m.params) os << " " << p.text;
        os << ")\n";
        for (const auto& br : m.branches) {
            os << "    (:branch " << br.rank << "\n";
            print_literals(os, ":pre", br.pre_pos, br.pre_neg, "      ");
            print_predlist(os, ":filter", br.filter, "      ");
            print_network(os, br.network, "      ");
            os << "    )\n";
        }
        os << "  )\n";
    }
    os << ")\n";
    return os.str();
}

std::string print_problem(const Problem& p, const Domain& d) {
    std::ostringstream os;
    os << "(define (problem " << p.name << ")\n";
    os << "  (:domain " << d.name << ")\n";
    os << "  (:init";
    for (const auto& f : p.init.facts()) {
        os << " ";
        print_pred(os, f);
    }
    os << ")\n";
    print_network(os, p.network, "  ");
    os << "  (:engine " << (p.engine == Engine::State ? "state" : "plan") << ")\n";
    os << "  (:style "
       << (p.style == Style::TOTD ? "totd" : p.style == Style::UTD ? "utd" : "potd") << ")\n";
    os << "  (:budget " << p.budget.max_decompositions << ")\n";
    os << ")\n";
    return os.str();
}

}  // namespace htn
