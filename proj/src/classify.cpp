#include <map>
#include <set>

#include "htn/domain_io.hpp"

namespace htn {

namespace {

// DFS cycle detection over the method call graph.
bool reaches_cycle(const std::string& node, const std::map<std::string, std::set<std::string>>& graph,
                   std::set<std::string>& on_path, std::set<std::string>& done) {
    if (done.count(node)) return false;
    if (on_path.count(node)) return true;
    on_path.insert(node);
    auto it = graph.find(node);
    if (it != graph.end())
        for (const auto& next : it->second)
            if (reaches_cycle(next, graph, on_path, done)) return true;
    on_path.erase(node);
    done.insert(node);
    return false;
}

}  // namespace

DomainClass classify_domain(const Domain& d) {
    DomainClass out;

    std::map<std::string, std::set<std::string>> call_graph;
    bool any_compound_use = false;
    out.is_regular = true;
    for (const auto& m : d.methods) {
        if (!m.params.empty()) out.with_variables = true;
        for (const auto& br : m.branches) {
            if (!br.network.totally_ordered()) out.totally_ordered = false;
            int compound_count = 0;
            for (const auto& t : br.network.tasks) {
                for (const auto& a : t.args)
                    if (a.is_variable()) out.with_variables = true;
                if (t.is_primitive()) continue;
                any_compound_use = true;
                call_graph[m.name].insert(t.name);
                ++compound_count;
                // Regular: the single compound task has no successor.
                for (const auto& [x, y] : br.network.ordering)
                    if (x == t.id) out.is_regular = false;
            }
            if (compound_count > 1) out.is_regular = false;
        }
    }
    for (const auto& op : d.operators) {
        if (!op.params.empty()) out.with_variables = true;
        for (const auto* ps : {&op.pre_pos, &op.pre_neg, &op.eff_add, &op.eff_del})
            for (const auto& p : *ps)
                for (const auto& a : p.args)
                    if (a.is_variable()) out.with_variables = true;
    }

    out.is_acyclic = true;
    std::set<std::string> done;
    for (const auto& m : d.methods) {
        std::set<std::string> on_path;
        if (reaches_cycle(m.name, call_graph, on_path, done)) {
            out.is_acyclic = false;
            break;
        }
    }
    out.is_recursive = !out.is_acyclic;

    if (d.methods.empty() && !any_compound_use)
        out.compound_setting = CompoundSetting::PrimitiveOnly;
    else if (out.is_acyclic)
        out.compound_setting = CompoundSetting::Acyclic;
    else if (out.is_regular)
        out.compound_setting = CompoundSetting::Regular;
    else
        out.compound_setting = CompoundSetting::Recursive;
    return out;
}

std::string DomainClass::to_string() const {
    std::string s;
    switch (compound_setting) {
        case CompoundSetting::PrimitiveOnly: s = "primitive-only"; break;
        case CompoundSetting::Regular: s = "regular"; break;
        case CompoundSetting::Acyclic: s = "acyclic"; break;
        case CompoundSetting::Recursive: s = "recursive"; break;
    }
    s += totally_ordered ? ", totally-ordered" : ", partially-ordered";
    s += with_variables ? ", with variables" : ", without variables";
    return s;
}

}  // namespace htn
