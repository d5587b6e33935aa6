#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "htn/model.hpp"

namespace htn {

struct SourceSpan {
    std::string file;
    int line = 1;    // 1-based
    int column = 1;  // 1-based
    int length = 1;

    std::string to_string() const;
};

struct ParseError {
    SourceSpan span;
    std::string message;
};

struct DomainParse {
    std::optional<Domain> domain;
    std::vector<ParseError> errors;
    bool ok() const { return domain.has_value() && errors.empty(); }
};

struct ProblemParse {
    std::optional<Problem> problem;
    std::vector<ParseError> errors;
    bool ok() const { return problem.has_value() && errors.empty(); }
};

DomainParse parse_domain(const std::string& text, const std::string& filename = "<input>");
// The domain is needed to resolve task names and predicate arities.
ProblemParse parse_problem(const std::string& text, const Domain& domain,
                           const std::string& filename = "<input>");

std::string print_domain(const Domain& d);
std::string print_problem(const Problem& p, const Domain& d);

// Structural settings of a domain, computed from the method-call graph.
enum class CompoundSetting { PrimitiveOnly, Regular, Acyclic, Recursive };

struct DomainClass {
    CompoundSetting compound_setting = CompoundSetting::PrimitiveOnly;
    bool totally_ordered = true;
    bool with_variables = false;
    // The settings overlap; the enum above applies precedence
    // primitive-only > acyclic > regular > recursive.
    bool is_regular = false;
    bool is_acyclic = true;
    bool is_recursive = false;

    std::string to_string() const;
};

DomainClass classify_domain(const Domain& d);

// Serialized plan output. Text: "k: (name arg...)" per step, 0-indexed.
// Structured: a JSON document with steps, trace, stats, and (plan mode)
// the solution network.
struct SolutionNetworkInfo;  // defined in plan_engine.hpp

std::string serialize_plan_text(const Plan& plan);
std::string serialize_plan_json(const Plan& plan, const SearchStats& stats,
                                const SolutionNetworkInfo* network = nullptr);
// Inverse of serialize_plan_json for the validator CLI path.
std::optional<Plan> parse_plan_json(const std::string& text, std::string* error = nullptr);

}  // namespace htn
