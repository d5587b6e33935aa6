#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace htn {

// A term is a constant or a variable. Variables are lexically
// distinguished by a leading '?', so the two namespaces cannot collide.
struct Term {
    std::string text;

    static Term var(std::string name) { return Term{std::move(name)}; }
    static Term cst(std::string name) { return Term{std::move(name)}; }

    bool is_variable() const { return !text.empty() && text[0] == '?'; }
    bool is_constant() const { return !is_variable(); }

    auto operator<=>(const Term&) const = default;
};

struct Predicate {
    std::string symbol;
    std::vector<Term> args;

    bool is_ground() const {
        for (const auto& a : args)
            if (a.is_variable()) return false;
        return true;
    }

    auto operator<=>(const Predicate&) const = default;

    std::string to_string() const;
};

// Closed-world ground state. Facts keep their insertion order so that
// binding enumeration is reproducible across runs.
class State {
public:
    State() = default;

    bool contains(const Predicate& p) const;
    // Returns false if the fact was already present.
    bool add(const Predicate& p);
    void remove(const Predicate& p);

    const std::vector<Predicate>& facts() const { return facts_; }
    std::size_t size() const { return facts_.size(); }

    // Set equality, independent of insertion order.
    bool operator==(const State& other) const;

private:
    std::vector<Predicate> facts_;
};

// Variable bindings, kept normalized: ranges never mention a variable
// that is itself bound, so applying twice equals applying once.
class Substitution {
public:
    Substitution() = default;

    // Binds var to value. Returns false on a clash with an existing
    // binding (same variable already bound to a different constant).
    bool bind(const std::string& var, const Term& value);

    Term apply(const Term& t) const;
    Predicate apply(const Predicate& p) const;
    std::vector<Term> apply(const std::vector<Term>& args) const;

    bool bound(const std::string& var) const { return bindings_.count(var) > 0; }
    std::optional<Term> lookup(const std::string& var) const;
    bool empty() const { return bindings_.empty(); }
    const std::map<std::string, Term>& bindings() const { return bindings_; }

    bool operator==(const Substitution&) const = default;

private:
    std::map<std::string, Term> bindings_;
};

// Extends sigma so that a and b become equal, or returns nullopt.
std::optional<Substitution> unify(const Term& a, const Term& b, Substitution sigma);
std::optional<Substitution> unify(const Predicate& a, const Predicate& b, Substitution sigma);
std::optional<Substitution> unify_args(const std::vector<Term>& a, const std::vector<Term>& b,
                                       Substitution sigma);

}  // namespace htn
