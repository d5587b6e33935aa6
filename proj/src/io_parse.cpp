#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "htn/domain_io.hpp"

namespace htn {

std::string SourceSpan::to_string() const {
    return file + ":" + std::to_string(line) + ":" + std::to_string(column);
}

namespace {

struct Sexp {
    bool is_atom = false;
    std::string atom;  // lowercased
    std::vector<Sexp> items;
    SourceSpan span;
};

class Lexer {
public:
    Lexer(const std::string& text, std::string file)
        : text_(text), file_(std::move(file)) {}

    struct Token {
        enum Kind { LParen, RParen, Atom, End } kind;
        std::string value;
        SourceSpan span;
    };

    Token next() {
        skip_ws();
        SourceSpan span{file_, line_, col_, 1};
        if (pos_ >= text_.size()) return {Token::End, "", span};
        char c = text_[pos_];
        if (c == '(') {
            advance();
            return {Token::LParen, "(", span};
        }
        if (c == ')') {
            advance();
            return {Token::RParen, ")", span};
        }
        std::string atom;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
               text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ';') {
            atom += static_cast<char>(std::tolower(static_cast<unsigned char>(text_[pos_])));
            advance();
        }
        span.length = static_cast<int>(atom.size());
        return {Token::Atom, atom, span};
    }

private:
    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& text_;
    std::string file_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class SexpParser {
public:
    SexpParser(const std::string& text, const std::string& file)
        : lexer_(text, file), file_(file) {
        tok_ = lexer_.next();
    }

    std::optional<Sexp> parse_top(std::vector<ParseError>& errors) {
        if (tok_.kind == Lexer::Token::End) {
            errors.push_back({tok_.span, "empty input"});
            return std::nullopt;
        }
        auto s = parse(errors);
        if (!s) return std::nullopt;
        if (tok_.kind != Lexer::Token::End)
            errors.push_back({tok_.span, "trailing content after top-level form"});
        return s;
    }

private:
    std::optional<Sexp> parse(std::vector<ParseError>& errors) {
        if (tok_.kind == Lexer::Token::Atom) {
            Sexp s;
            s.is_atom = true;
            s.atom = tok_.value;
            s.span = tok_.span;
            tok_ = lexer_.next();
            return s;
        }
        if (tok_.kind == Lexer::Token::LParen) {
            Sexp s;
            s.span = tok_.span;
            tok_ = lexer_.next();
            while (tok_.kind != Lexer::Token::RParen) {
                if (tok_.kind == Lexer::Token::End) {
                    errors.push_back({s.span, "unclosed parenthesis"});
                    return std::nullopt;
                }
                auto child = parse(errors);
                if (!child) return std::nullopt;
                s.items.push_back(std::move(*child));
            }
            tok_ = lexer_.next();
            return s;
        }
        errors.push_back({tok_.span, "unexpected ')'"});
        return std::nullopt;
    }

    Lexer lexer_;
    std::string file_;
    Lexer::Token tok_;
};

bool is_var_name(const std::string& s) { return !s.empty() && s[0] == '?'; }

class Builder {
public:
    explicit Builder(std::vector<ParseError>& errors) : errors_(errors) {}

protected:
    void error(const SourceSpan& span, const std::string& msg) { errors_.push_back({span, msg}); }

    bool expect_list(const Sexp& s, const std::string& what) {
        if (s.is_atom) {
            error(s.span, "expected a list for " + what);
            return false;
        }
        return true;
    }

    bool head_is(const Sexp& s, const std::string& kw) {
        return !s.is_atom && !s.items.empty() && s.items[0].is_atom && s.items[0].atom == kw;
    }

    std::optional<Predicate> build_predicate(const Sexp& s, std::map<std::string, int>& arities,
                                             bool declare) {
        if (s.is_atom || s.items.empty() || !s.items[0].is_atom) {
            error(s.span, "expected (predicate arg...)");
            return std::nullopt;
        }
        Predicate p;
        p.symbol = s.items[0].atom;
        if (is_var_name(p.symbol) || p.symbol[0] == '!' || p.symbol[0] == ':') {
            error(s.items[0].span, "invalid predicate symbol '" + p.symbol + "'");
            return std::nullopt;
        }
        for (std::size_t i = 1; i < s.items.size(); ++i) {
            if (!s.items[i].is_atom) {
                error(s.items[i].span, "predicate arguments must be atoms");
                return std::nullopt;
            }
            p.args.push_back(Term{s.items[i].atom});
        }
        int arity = static_cast<int>(p.args.size());
        auto it = arities.find(p.symbol);
        if (it == arities.end()) {
            if (declare) arities[p.symbol] = arity;
            else {
                // First use fixes the arity when there is no declaration.
                arities[p.symbol] = arity;
            }
        } else if (it->second != arity) {
            error(s.span, "predicate '" + p.symbol + "' used with arity " + std::to_string(arity) +
                              ", expected " + std::to_string(it->second));
            return std::nullopt;
        }
        return p;
    }

    // LITERAL = (pred args...) | (not (pred args...))
    void build_literals(const Sexp& s, std::map<std::string, int>& arities,
                        std::vector<Predicate>& pos, std::vector<Predicate>& neg) {
        for (std::size_t i = 1; i < s.items.size(); ++i) {
            const Sexp& lit = s.items[i];
            if (head_is(lit, "not")) {
                if (lit.items.size() != 2) {
                    error(lit.span, "expected (not (predicate ...))");
                    continue;
                }
                auto p = build_predicate(lit.items[1], arities, false);
                if (p) neg.push_back(std::move(*p));
            } else {
                auto p = build_predicate(lit, arities, false);
                if (p) pos.push_back(std::move(*p));
            }
        }
    }

    // Plain predicate list; (not ...) is rejected.
    void build_predlist(const Sexp& s, std::map<std::string, int>& arities,
                        std::vector<Predicate>& out) {
        for (std::size_t i = 1; i < s.items.size(); ++i) {
            if (head_is(s.items[i], "not")) {
                error(s.items[i].span, "negation is not allowed here");
                continue;
            }
            auto p = build_predicate(s.items[i], arities, false);
            if (p) out.push_back(std::move(*p));
        }
    }

    std::vector<ParseError>& errors_;
};

class DomainBuilder : Builder {
public:
    explicit DomainBuilder(std::vector<ParseError>& errors) : Builder(errors) {}

    std::optional<Domain> build(const Sexp& top) {
        if (top.is_atom || top.items.size() < 2 || !head_is(top, "define")) {
            error(top.span, "expected (define (domain NAME) ...)");
            return std::nullopt;
        }
        const Sexp& header = top.items[1];
        if (!head_is(header, "domain") || header.items.size() != 2 || !header.items[1].is_atom) {
            error(header.span, "expected (domain NAME)");
            return std::nullopt;
        }
        Domain d;
        d.name = header.items[1].atom;
        for (std::size_t i = 2; i < top.items.size(); ++i) {
            const Sexp& sec = top.items[i];
            if (head_is(sec, ":predicates")) build_predicates(sec, d);
            else if (head_is(sec, ":operator")) build_operator(sec, d);
            else if (head_is(sec, ":method")) build_method(sec, d);
            else error(sec.span, "unknown domain section");
        }
        finish_validation(d);
        if (!errors_.empty()) return std::nullopt;
        for (const auto& [sym, arity] : arities_)
            d.predicates.push_back({sym, arity});
        return d;
    }

private:
    void build_predicates(const Sexp& sec, Domain&) {
        for (std::size_t i = 1; i < sec.items.size(); ++i)
            build_predicate(sec.items[i], arities_, true);
    }

    std::optional<std::pair<std::string, std::vector<Term>>> build_head(const Sexp& s,
                                                                        bool primitive) {
        if (s.is_atom || s.items.empty() || !s.items[0].is_atom) {
            error(s.span, "expected (name ?v...)");
            return std::nullopt;
        }
        std::string name = s.items[0].atom;
        if (primitive != is_primitive_name(name)) {
            error(s.items[0].span, primitive ? "operator names must start with '!'"
                                             : "method names must not start with '!'");
            return std::nullopt;
        }
        std::vector<Term> params;
        std::set<std::string> seen;
        for (std::size_t i = 1; i < s.items.size(); ++i) {
            if (!s.items[i].is_atom || !is_var_name(s.items[i].atom)) {
                error(s.items[i].span, "parameters must be variables");
                return std::nullopt;
            }
            if (!seen.insert(s.items[i].atom).second)
                error(s.items[i].span, "duplicate parameter " + s.items[i].atom);
            params.push_back(Term::var(s.items[i].atom));
        }
        return std::make_pair(name, params);
    }

    void build_operator(const Sexp& sec, Domain& d) {
        if (sec.items.size() < 2) {
            error(sec.span, "expected (:operator (!name ?v...) ...)");
            return;
        }
        auto head = build_head(sec.items[1], true);
        if (!head) return;
        Operator op;
        op.name = head->first;
        op.params = head->second;
        if (d.find_operator(op.name)) {
            error(sec.items[1].span, "duplicate operator " + op.name);
            return;
        }
        for (std::size_t i = 2; i < sec.items.size(); ++i) {
            const Sexp& part = sec.items[i];
            if (head_is(part, ":pre")) build_literals(part, arities_, op.pre_pos, op.pre_neg);
            else if (head_is(part, ":add")) build_predlist(part, arities_, op.eff_add);
            else if (head_is(part, ":del")) build_predlist(part, arities_, op.eff_del);
            else if (head_is(part, ":protect")) build_predlist(part, arities_, op.protect_add);
            else if (head_is(part, ":cancel")) build_predlist(part, arities_, op.protect_cancel);
            else if (head_is(part, ":resources")) build_resources(part, op);
            else error(part.span, "unknown operator section");
        }
        validate_operator(sec.span, op);
        d.operators.push_back(std::move(op));
    }

    void build_resources(const Sexp& part, Operator& op) {
        for (std::size_t i = 1; i < part.items.size(); ++i) {
            const Sexp& v = part.items[i];
            if (!v.is_atom || !is_var_name(v.atom)) {
                error(v.span, "resources must name parameter variables");
                continue;
            }
            auto it = std::find(op.params.begin(), op.params.end(), Term::var(v.atom));
            if (it == op.params.end()) {
                error(v.span, v.atom + " is not a parameter of " + op.name);
                continue;
            }
            op.resource_params.push_back(static_cast<int>(it - op.params.begin()));
        }
    }

    void validate_operator(const SourceSpan& span, const Operator& op) {
        std::set<std::string> params;
        for (const auto& p : op.params) params.insert(p.text);
        auto check_vars = [&](const std::vector<Predicate>& ps, const char* what) {
            for (const auto& p : ps)
                for (const auto& a : p.args)
                    if (a.is_variable() && !params.count(a.text))
                        error(span, "variable " + a.text + " in " + what + " of " + op.name +
                                        " is not a parameter");
        };
        check_vars(op.pre_pos, "preconditions");
        check_vars(op.pre_neg, "preconditions");
        check_vars(op.eff_add, "effects");
        check_vars(op.eff_del, "effects");
        check_vars(op.protect_add, "protections");
        check_vars(op.protect_cancel, "protections");
        // Overlapping add/delete effects are authoring bugs; reject.
        for (const auto& p : op.eff_add)
            if (std::find(op.eff_del.begin(), op.eff_del.end(), p) != op.eff_del.end())
                error(span, "operator " + op.name + " both adds and deletes " + p.to_string());
    }

    void build_method(const Sexp& sec, Domain& d) {
        if (sec.items.size() < 2) {
            error(sec.span, "expected (:method (name ?v...) BRANCH...)");
            return;
        }
        auto head = build_head(sec.items[1], false);
        if (!head) return;
        Method m;
        m.name = head->first;
        m.params = head->second;
        if (d.find_method(m.name)) {
            error(sec.items[1].span, "duplicate method " + m.name);
            return;
        }
        for (std::size_t i = 2; i < sec.items.size(); ++i) {
            if (!head_is(sec.items[i], ":branch")) {
                error(sec.items[i].span, "expected (:branch RANK ...)");
                continue;
            }
            build_branch(sec.items[i], m);
        }
        std::set<int> ranks;
        for (const auto& b : m.branches) {
            if (!ranks.insert(b.rank).second)
                error(sec.span, "duplicate branch rank in " + m.name);
        }
        for (int r = 1; r <= static_cast<int>(m.branches.size()); ++r)
            if (!ranks.count(r)) error(sec.span, "branch ranks of " + m.name + " must form 1..k");
        std::stable_sort(m.branches.begin(), m.branches.end(),
                         [](const MethodBranch& a, const MethodBranch& b) { return a.rank < b.rank; });
        d.methods.push_back(std::move(m));
    }

    void build_branch(const Sexp& sec, Method& m) {
        MethodBranch br;
        if (sec.items.size() < 2 || !sec.items[1].is_atom) {
            error(sec.span, "branch needs a rank");
            return;
        }
        try {
            br.rank = std::stoi(sec.items[1].atom);
        } catch (...) {
            error(sec.items[1].span, "branch rank must be an integer");
            return;
        }
        bool saw_network = false;
        for (std::size_t i = 2; i < sec.items.size(); ++i) {
            const Sexp& part = sec.items[i];
            if (head_is(part, ":pre")) build_literals(part, arities_, br.pre_pos, br.pre_neg);
            else if (head_is(part, ":filter")) {
                std::vector<Predicate> neg;
                build_literals(part, arities_, br.filter, neg);
                if (!neg.empty()) error(part.span, "filter conditions must be positive");
            } else if (head_is(part, ":network")) {
                saw_network = true;
                build_network(part, br.network);
            } else error(part.span, "unknown branch section");
        }
        if (!saw_network) error(sec.span, "branch has no :network");
        // Unsafe negation: variables occurring only in negative
        // preconditions would flounder.
        std::set<std::string> safe;
        for (const auto& p : m.params)
            safe.insert(p.text);
        for (const auto& p : br.pre_pos)
            for (const auto& a : p.args)
                if (a.is_variable()) safe.insert(a.text);
        for (const auto& p : br.pre_neg)
            for (const auto& a : p.args)
                if (a.is_variable() && !safe.count(a.text))
                    error(sec.span, "unsafe negation: " + a.text + " occurs only in (not ...)");
        m.branches.push_back(std::move(br));
    }

public:
    // Also used by the problem builder for (:network ...) blocks.
    void build_network(const Sexp& sec, TaskNetwork& tn) {
        std::map<std::string, int> labels;
        int next_id = next_network_id_;
        for (std::size_t i = 1; i < sec.items.size(); ++i) {
            const Sexp& part = sec.items[i];
            if (head_is(part, ":tasks")) {
                for (std::size_t j = 1; j < part.items.size(); ++j) {
                    const Sexp& entry = part.items[j];
                    if (entry.is_atom || entry.items.size() != 2 || !entry.items[0].is_atom ||
                        entry.items[1].is_atom || entry.items[1].items.empty() ||
                        !entry.items[1].items[0].is_atom) {
                        error(entry.span, "expected (label (task-name arg...))");
                        continue;
                    }
                    const std::string& label = entry.items[0].atom;
                    if (labels.count(label)) {
                        error(entry.items[0].span, "duplicate task label " + label);
                        continue;
                    }
                    TaskInstance t;
                    t.id = next_id++;
                    t.name = entry.items[1].items[0].atom;
                    task_refs_.push_back({entry.items[1].span, t.name,
                                          entry.items[1].items.size() - 1});
                    for (std::size_t k = 1; k < entry.items[1].items.size(); ++k) {
                        if (!entry.items[1].items[k].is_atom) {
                            error(entry.items[1].items[k].span, "task arguments must be atoms");
                            continue;
                        }
                        t.args.push_back(Term{entry.items[1].items[k].atom});
                    }
                    labels[label] = t.id;
                    tn.add_task(std::move(t));
                }
            }
        }
        auto lookup = [&](const Sexp& atom) -> int {
            if (!atom.is_atom) {
                error(atom.span, "expected a task label");
                return -2;
            }
            auto it = labels.find(atom.atom);
            if (it == labels.end()) {
                error(atom.span, "unknown task label " + atom.atom);
                return -2;
            }
            return it->second;
        };
        for (std::size_t i = 1; i < sec.items.size(); ++i) {
            const Sexp& part = sec.items[i];
            if (head_is(part, ":tasks")) continue;
            if (head_is(part, ":order")) {
                for (std::size_t j = 1; j < part.items.size(); ++j) {
                    const Sexp& e = part.items[j];
                    if (e.is_atom || e.items.size() != 2) {
                        error(e.span, "expected (label label)");
                        continue;
                    }
                    int a = lookup(e.items[0]);
                    int b = lookup(e.items[1]);
                    if (a >= 0 && b >= 0) {
                        if (a == b) error(e.span, "ordering edge on a single task");
                        else tn.ordering.insert({a, b});
                    }
                }
            } else if (head_is(part, ":before") || head_is(part, ":after") ||
                       head_is(part, ":not-before")) {
                bool is_after = head_is(part, ":after");
                bool is_neg = head_is(part, ":not-before");
                if (part.items.size() != 3) {
                    error(part.span, is_after ? "expected (:after label (pred ...))"
                                              : "expected (:before (pred ...) label)");
                    continue;
                }
                const Sexp& pred_s = part.items[is_after ? 2 : 1];
                const Sexp& task_s = part.items[is_after ? 1 : 2];
                auto p = build_predicate(pred_s, arities_, false);
                int t = lookup(task_s);
                if (p && t >= 0) {
                    StateConstraintKind k = is_after ? StateConstraintKind::After
                                          : is_neg  ? StateConstraintKind::NotBefore
                                                    : StateConstraintKind::Before;
                    tn.state_constraints.push_back({k, std::move(*p), t, -1});
                }
            } else if (head_is(part, ":between")) {
                if (part.items.size() != 4) {
                    error(part.span, "expected (:between label (pred ...) label)");
                    continue;
                }
                int a = lookup(part.items[1]);
                auto p = build_predicate(part.items[2], arities_, false);
                int b = lookup(part.items[3]);
                if (p && a >= 0 && b >= 0)
                    tn.state_constraints.push_back(
                        {StateConstraintKind::Between, std::move(*p), a, b});
            } else if (head_is(part, ":bind")) {
                for (std::size_t j = 1; j < part.items.size(); ++j) {
                    const Sexp& e = part.items[j];
                    if (e.is_atom || e.items.size() != 3 || !e.items[0].is_atom ||
                        (e.items[0].atom != "=" && e.items[0].atom != "!=") ||
                        !e.items[1].is_atom || !e.items[2].is_atom) {
                        error(e.span, "expected (= a b) or (!= a b)");
                        continue;
                    }
                    tn.bindings.push_back(
                        {Term{e.items[1].atom}, Term{e.items[2].atom}, e.items[0].atom == "="});
                }
            } else {
                error(part.span, "unknown network section");
            }
        }
        if (!tn.ordering_acyclic()) error(sec.span, "ordering constraints form a cycle");
        next_network_id_ = next_id;
    }

    // Every task name occurring in a network must be a known operator
    // or method with matching arity ('!' keeps T_p and T_c disjoint).
    void finish_validation(const Domain& d) {
        for (const auto& ref : task_refs_) {
            std::size_t expected;
            if (is_primitive_name(ref.name)) {
                const Operator* op = d.find_operator(ref.name);
                if (!op) {
                    error(ref.span, "unknown primitive task " + ref.name);
                    continue;
                }
                expected = op->params.size();
            } else {
                const Method* mm = d.find_method(ref.name);
                if (!mm) {
                    error(ref.span, "unknown compound task " + ref.name);
                    continue;
                }
                expected = mm->params.size();
            }
            if (ref.argc != expected)
                error(ref.span, "task " + ref.name + " has " + std::to_string(ref.argc) +
                                    " arguments, expected " + std::to_string(expected));
        }
    }

    std::map<std::string, int>& arities() { return arities_; }
    int next_network_id_ = 1;

private:
    struct TaskRef {
        SourceSpan span;
        std::string name;
        std::size_t argc;
    };
    std::vector<TaskRef> task_refs_;
    std::map<std::string, int> arities_;
};

class ProblemBuilder : Builder {
public:
    ProblemBuilder(std::vector<ParseError>& errors, const Domain& domain)
        : Builder(errors), domain_(domain) {
        for (const auto& p : domain.predicates) arities_[p.symbol] = p.arity;
    }

    std::optional<Problem> build(const Sexp& top) {
        if (top.is_atom || top.items.size() < 2 || !head_is(top, "define")) {
            error(top.span, "expected (define (problem NAME) ...)");
            return std::nullopt;
        }
        const Sexp& header = top.items[1];
        if (!head_is(header, "problem") || header.items.size() != 2 || !header.items[1].is_atom) {
            error(header.span, "expected (problem NAME)");
            return std::nullopt;
        }
        Problem p;
        p.name = header.items[1].atom;
        DomainBuilder net_builder(errors_);
        net_builder.arities() = arities_;
        bool saw_network = false;
        for (std::size_t i = 2; i < top.items.size(); ++i) {
            const Sexp& sec = top.items[i];
            if (head_is(sec, ":domain")) {
                if (sec.items.size() != 2 || !sec.items[1].is_atom)
                    error(sec.span, "expected (:domain NAME)");
                else {
                    p.domain_name = sec.items[1].atom;
                    if (p.domain_name != domain_.name)
                        error(sec.items[1].span, "problem names domain '" + p.domain_name +
                                                     "' but '" + domain_.name + "' was loaded");
                }
            } else if (head_is(sec, ":init")) {
                for (std::size_t j = 1; j < sec.items.size(); ++j) {
                    auto fact = build_predicate(sec.items[j], net_builder.arities(), false);
                    if (!fact) continue;
                    if (!domain_.predicates.empty() && !arities_.count(fact->symbol)) {
                        error(sec.items[j].span, "unknown predicate " + fact->symbol);
                        continue;
                    }
                    if (!fact->is_ground())
                        error(sec.items[j].span, "init facts must be ground");
                    else p.init.add(*fact);
                }
            } else if (head_is(sec, ":network")) {
                saw_network = true;
                net_builder.build_network(sec, p.network);
            } else if (head_is(sec, ":engine")) {
                if (sec.items.size() != 2 || !sec.items[1].is_atom ||
                    (sec.items[1].atom != "state" && sec.items[1].atom != "plan"))
                    error(sec.span, "expected (:engine state|plan)");
                else p.engine = sec.items[1].atom == "state" ? Engine::State : Engine::Plan;
            } else if (head_is(sec, ":style")) {
                if (sec.items.size() != 2 || !sec.items[1].is_atom)
                    error(sec.span, "expected (:style totd|utd|potd)");
                else if (sec.items[1].atom == "totd") p.style = Style::TOTD;
                else if (sec.items[1].atom == "utd") p.style = Style::UTD;
                else if (sec.items[1].atom == "potd") p.style = Style::POTD;
                else error(sec.items[1].span, "expected totd, utd or potd");
            } else if (head_is(sec, ":budget")) {
                if (sec.items.size() != 2 || !sec.items[1].is_atom)
                    error(sec.span, "expected (:budget N)");
                else {
                    try {
                        p.budget.max_decompositions = std::stol(sec.items[1].atom);
                        if (p.budget.max_decompositions <= 0)
                            error(sec.items[1].span, "budget must be positive");
                    } catch (...) {
                        error(sec.items[1].span, "budget must be an integer");
                    }
                }
            } else {
                error(sec.span, "unknown problem section");
            }
        }
        (void)saw_network;  // an absent or empty network is valid
        net_builder.finish_validation(domain_);
        p.next_task_id = net_builder.next_network_id_;
        if (!errors_.empty()) return std::nullopt;
        return p;
    }

private:
    const Domain& domain_;
    std::map<std::string, int> arities_;
};

}  // namespace

DomainParse parse_domain(const std::string& text, const std::string& filename) {
    DomainParse result;
    SexpParser parser(text, filename);
    auto top = parser.parse_top(result.errors);
    if (!top) return result;
    DomainBuilder builder(result.errors);
    result.domain = builder.build(*top);
    if (!result.errors.empty()) result.domain.reset();
    return result;
}

ProblemParse parse_problem(const std::string& text, const Domain& domain,
                           const std::string& filename) {
    ProblemParse result;
    SexpParser parser(text, filename);
    auto top = parser.parse_top(result.errors);
    if (!top) return result;
    ProblemBuilder builder(result.errors, domain);
    result.problem = builder.build(*top);
    if (!result.errors.empty()) result.problem.reset();
    return result;
}

}  // namespace htn
