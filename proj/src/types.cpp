#include "htn/types.hpp"

#include <algorithm>

namespace htn {

std::string Predicate::to_string() const {
    std::string out = "(" + symbol;
    for (const auto& a : args) out += " " + a.text;
    return out + ")";
}

bool State::contains(const Predicate& p) const {
    return std::find(facts_.begin(), facts_.end(), p) != facts_.end();
}

bool State::add(const Predicate& p) {
    if (contains(p)) return false;
    facts_.push_back(p);
    return true;
}

void State::remove(const Predicate& p) {
    facts_.erase(std::remove(facts_.begin(), facts_.end(), p), facts_.end());
}

bool State::operator==(const State& other) const {
    if (facts_.size() != other.facts_.size()) return false;
    auto a = facts_;
    auto b = other.facts_;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

bool Substitution::bind(const std::string& var, const Term& value) {
    Term resolved = apply(value);
    if (resolved.is_variable() && resolved.text == var) return true;  // trivial
    auto it = bindings_.find(var);
    if (it != bindings_.end()) return it->second == resolved;
    bindings_[var] = resolved;
    // Keep normalized: rewrite existing ranges mentioning var.
    for (auto& [k, v] : bindings_) {
        if (v.is_variable() && v.text == var) v = resolved;
    }
    return true;
}

Term Substitution::apply(const Term& t) const {
    Term cur = t;
    // Bounded chase; normalization keeps chains short but a fresh
    // lookup may still hit one hop.
    for (int i = 0; i < 64 && cur.is_variable(); ++i) {
        auto it = bindings_.find(cur.text);
        if (it == bindings_.end()) break;
        cur = it->second;
    }
    return cur;
}

Predicate Substitution::apply(const Predicate& p) const {
    Predicate out = p;
    for (auto& a : out.args) a = apply(a);
    return out;
}

std::vector<Term> Substitution::apply(const std::vector<Term>& args) const {
    std::vector<Term> out = args;
    for (auto& a : out) a = apply(a);
    return out;
}

std::optional<Term> Substitution::lookup(const std::string& var) const {
    auto it = bindings_.find(var);
    if (it == bindings_.end()) return std::nullopt;
    return it->second;
}

std::optional<Substitution> unify(const Term& a, const Term& b, Substitution sigma) {
    Term ra = sigma.apply(a);
    Term rb = sigma.apply(b);
    if (ra == rb) return sigma;
    if (ra.is_variable()) {
        if (!sigma.bind(ra.text, rb)) return std::nullopt;
        return sigma;
    }
    if (rb.is_variable()) {
        if (!sigma.bind(rb.text, ra)) return std::nullopt;
        return sigma;
    }
    return std::nullopt;  // distinct constants
}

std::optional<Substitution> unify_args(const std::vector<Term>& a, const std::vector<Term>& b,
                                       Substitution sigma) {
    if (a.size() != b.size()) return std::nullopt;
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto next = unify(a[i], b[i], std::move(sigma));
        if (!next) return std::nullopt;
        sigma = std::move(*next);
    }
    return sigma;
}

std::optional<Substitution> unify(const Predicate& a, const Predicate& b, Substitution sigma) {
    if (a.symbol != b.symbol) return std::nullopt;
    return unify_args(a.args, b.args, std::move(sigma));
}

}  // namespace htn
