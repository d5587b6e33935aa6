#include "htn/model.hpp"

#include <algorithm>
#include <deque>

namespace htn {

bool TaskNetwork::is_primitive() const {
    return std::all_of(tasks.begin(), tasks.end(),
                       [](const TaskInstance& t) { return t.is_primitive(); });
}

const TaskInstance* TaskNetwork::find_task(int id) const {
    for (const auto& t : tasks)
        if (t.id == id) return &t;
    return nullptr;
}

void TaskNetwork::add_task(TaskInstance t) {
    auto pos = std::lower_bound(tasks.begin(), tasks.end(), t.id,
                                [](const TaskInstance& a, int id) { return a.id < id; });
    tasks.insert(pos, std::move(t));
}

void TaskNetwork::remove_task(int id) {
    tasks.erase(std::remove_if(tasks.begin(), tasks.end(),
                               [id](const TaskInstance& t) { return t.id == id; }),
                tasks.end());
    std::erase_if(ordering, [id](const auto& e) { return e.first == id || e.second == id; });
    std::erase_if(state_constraints,
                  [id](const StateConstraint& c) { return c.first == id || c.second == id; });
}

bool TaskNetwork::precedes(int a, int b) const {
    if (a == b) return false;
    std::deque<int> queue{a};
    std::set<int> seen{a};
    while (!queue.empty()) {
        int cur = queue.front();
        queue.pop_front();
        for (const auto& [x, y] : ordering) {
            if (x != cur || seen.count(y)) continue;
            if (y == b) return true;
            seen.insert(y);
            queue.push_back(y);
        }
    }
    return false;
}

bool TaskNetwork::ordering_acyclic() const {
    for (const auto& t : tasks)
        if (precedes(t.id, t.id)) return false;
    // Self-loop edges on their own:
    for (const auto& [a, b] : ordering)
        if (a == b) return false;
    return true;
}

bool TaskNetwork::totally_ordered() const {
    for (std::size_t i = 0; i < tasks.size(); ++i)
        for (std::size_t j = i + 1; j < tasks.size(); ++j)
            if (!precedes(tasks[i].id, tasks[j].id) && !precedes(tasks[j].id, tasks[i].id))
                return false;
    return true;
}

std::vector<int> TaskNetwork::minimal_tasks() const {
    std::vector<int> out;
    for (const auto& t : tasks) {
        bool has_pred = false;
        for (const auto& u : tasks) {
            if (u.id != t.id && precedes(u.id, t.id)) {
                has_pred = true;
                break;
            }
        }
        if (!has_pred) out.push_back(t.id);
    }
    return out;  // tasks are id-sorted already
}

std::vector<int> TaskNetwork::total_order() const {
    std::vector<int> out;
    std::vector<int> ids;
    for (const auto& t : tasks) ids.push_back(t.id);
    while (!ids.empty()) {
        for (auto it = ids.begin(); it != ids.end(); ++it) {
            bool minimal = true;
            for (int other : ids)
                if (other != *it && precedes(other, *it)) {
                    minimal = false;
                    break;
                }
            if (minimal) {
                out.push_back(*it);
                ids.erase(it);
                break;
            }
        }
    }
    return out;
}

void TaskNetwork::apply_substitution(const Substitution& sigma) {
    for (auto& t : tasks) t.args = sigma.apply(t.args);
    for (auto& b : bindings) {
        b.lhs = sigma.apply(b.lhs);
        b.rhs = sigma.apply(b.rhs);
    }
    for (auto& c : state_constraints) c.pred = sigma.apply(c.pred);
}

const Operator* Domain::find_operator(const std::string& name) const {
    for (const auto& o : operators)
        if (o.name == name) return &o;
    return nullptr;
}

const Method* Domain::find_method(const std::string& name) const {
    for (const auto& m : methods)
        if (m.name == name) return &m;
    return nullptr;
}

std::string GroundStep::to_string() const {
    std::string out = "(" + name;
    for (const auto& a : args) out += " " + a.text;
    return out + ")";
}

}  // namespace htn
