#include <sstream>

#include "htn/domain_io.hpp"
#include "htn/plan_engine.hpp"
#include "json.hpp"

namespace htn {

namespace {

using nlohmann::json;

json terms_to_json(const std::vector<Term>& args) {
    json out = json::array();
    for (const auto& a : args) out.push_back(a.text);
    return out;
}

json pred_to_json(const Predicate& p) {
    return json{{"symbol", p.symbol}, {"args", terms_to_json(p.args)}};
}

json step_to_json(const GroundStep& s) {
    return json{{"name", s.name}, {"args", terms_to_json(s.args)}};
}

// Engines suffix variables ("?x#o3") to keep decomposition scopes apart.
// Strip the suffix for display; the raw name is an internal detail.
std::string display_var(const std::string& name) {
    auto pos = name.find('#');
    return pos == std::string::npos ? name : name.substr(0, pos);
}

json trace_to_json(const std::vector<DecompositionRecord>& trace) {
    json out = json::array();
    for (const auto& r : trace) {
        json binding = json::object();
        for (const auto& [var, val] : r.binding.bindings()) binding[display_var(var)] = val.text;
        out.push_back(json{{"task_id", r.task_id},
                           {"task_name", r.task_name},
                           {"task_args", terms_to_json(r.task_args)},
                           {"method", r.method_name},
                           {"branch", r.branch_rank},
                           {"binding", binding},
                           {"children", r.child_ids}});
    }
    return out;
}

}  // namespace

std::string serialize_plan_text(const Plan& plan) {
    std::ostringstream out;
    for (size_t i = 0; i < plan.steps.size(); ++i)
        out << i << ": " << plan.steps[i].to_string() << "\n";
    return out.str();
}

std::string serialize_plan_json(const Plan& plan, const SearchStats& stats,
                                const SolutionNetworkInfo* network) {
    json out;
    json steps = json::array();
    for (const auto& s : plan.steps) steps.push_back(step_to_json(s));
    out["steps"] = steps;
    out["trace"] = trace_to_json(plan.trace);
    out["stats"] = json{{"nodes_expanded", stats.nodes_expanded},
                        {"decompositions", stats.decompositions},
                        {"applications", stats.applications},
                        {"backtracks", stats.backtracks},
                        {"max_depth", stats.max_depth}};
    if (network) {
        json tasks = json::array();
        for (const auto& t : network->network.tasks)
            tasks.push_back(json{{"id", t.id}, {"name", t.name}, {"args", terms_to_json(t.args)}});
        json ordering = json::array();
        for (const auto& [a, b] : network->network.ordering)
            ordering.push_back(json::array({a, b}));
        json links = json::array();
        for (const auto& l : network->links)
            links.push_back(json{{"producer", l.producer},
                                 {"consumer", l.consumer},
                                 {"predicate", pred_to_json(l.predicate)}});
        out["network"] = json{{"tasks", tasks}, {"ordering", ordering}, {"links", links}};
    }
    return out.dump(2) + "\n";
}

std::optional<Plan> parse_plan_json(const std::string& text, std::string* error) {
    json in = json::parse(text, nullptr, false);
    if (in.is_discarded() || !in.is_object() || !in.contains("steps") ||
        !in["steps"].is_array()) {
        if (error) *error = "malformed plan JSON";
        return std::nullopt;
    }
    Plan plan;
    for (const auto& step : in["steps"]) {
        if (!step.is_object() || !step.contains("name") || !step["name"].is_string() ||
            !step.contains("args") || !step["args"].is_array()) {
            if (error) *error = "malformed plan step";
            return std::nullopt;
        }
        GroundStep gs;
        gs.name = step["name"].get<std::string>();
        for (const auto& a : step["args"]) {
            if (!a.is_string()) {
                if (error) *error = "malformed step argument";
                return std::nullopt;
            }
            gs.args.push_back(Term::cst(a.get<std::string>()));
        }
        plan.steps.push_back(std::move(gs));
    }
    if (in.contains("trace") && in["trace"].is_array()) {
        for (const auto& r : in["trace"]) {
            DecompositionRecord rec;
            rec.task_id = r.value("task_id", 0);
            rec.task_name = r.value("task_name", std::string{});
            rec.method_name = r.value("method", std::string{});
            rec.branch_rank = r.value("branch", 1);
            if (r.contains("task_args"))
                for (const auto& a : r["task_args"])
                    rec.task_args.push_back(Term::cst(a.get<std::string>()));
            if (r.contains("binding"))
                for (const auto& [var, val] : r["binding"].items())
                    rec.binding.bind(var, Term::cst(val.get<std::string>()));
            if (r.contains("children"))
                for (const auto& c : r["children"]) rec.child_ids.push_back(c.get<int>());
            plan.trace.push_back(std::move(rec));
        }
    }
    return plan;
}

}  // namespace htn
