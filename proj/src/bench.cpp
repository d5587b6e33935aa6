#include "htn/bench.hpp"

#include <chrono>
#include <iomanip>
#include <sstream>

#include "htn/domain_io.hpp"
#include "htn/generate.hpp"
#include "htn/plan_engine.hpp"
#include "htn/state_engine.hpp"
#include "htn/validate.hpp"
#include "json.hpp"

namespace htn {

std::string BenchReport::to_text() const {
    std::ostringstream out;
    out << "boxes cities locs engine result    valid  seconds    nodes decomps  steps\n";
    for (const auto& r : rows) {
        out << std::left << std::setw(6) << r.boxes << std::setw(7) << r.cities << std::setw(5)
            << r.locs_per_city << std::setw(7) << r.engine << std::setw(10) << r.result
            << std::setw(7) << (r.validated ? "yes" : "no") << std::right << std::fixed
            << std::setprecision(3) << std::setw(8) << r.wall_seconds << std::setw(9)
            << r.stats.nodes_expanded << std::setw(8) << r.stats.decompositions << std::setw(7)
            << r.plan_length << "\n";
    }
    return out.str();
}

std::string BenchReport::to_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows)
        out.push_back({{"boxes", r.boxes},
                       {"cities", r.cities},
                       {"locs_per_city", r.locs_per_city},
                       {"engine", r.engine},
                       {"result", r.result},
                       {"validated", r.validated},
                       {"wall_seconds", r.wall_seconds},
                       {"plan_length", r.plan_length},
                       {"stats",
                        {{"nodes_expanded", r.stats.nodes_expanded},
                         {"decompositions", r.stats.decompositions},
                         {"applications", r.stats.applications},
                         {"backtracks", r.stats.backtracks},
                         {"max_depth", r.stats.max_depth}}}});
    return out.dump(2) + "\n";
}

BenchReport run_bench(int max_boxes, int cities, int locs_per_city, unsigned seed,
                      const std::string& engine, const Budget& budget) {
    BenchReport report;
    for (int boxes = 1; boxes <= max_boxes; ++boxes) {
        BenchRow row;
        row.boxes = boxes;
        row.cities = cities;
        row.locs_per_city = locs_per_city;
        row.engine = engine;
        auto start = std::chrono::steady_clock::now();
        try {
            auto gen = gen_logistics(boxes, cities, locs_per_city, seed);
            auto dp = parse_domain(gen.domain_text, "<generated>");
            if (!dp.ok()) throw std::runtime_error("generated domain failed to parse");
            auto pb = parse_problem(gen.problem_text, *dp.domain, "<generated>");
            if (!pb.ok()) throw std::runtime_error("generated problem failed to parse");
            PlanningProblem pp{*dp.domain, *pb.problem};

            SearchOutcome outcome;
            Plan plan;
            if (engine == "plan") {
                pp.problem.engine = Engine::Plan;
                auto res = plan_po(pp, budget);
                outcome = res.outcome;
                row.stats = res.stats;
                if (!res.solutions.empty())
                    plan = {res.solutions.front().linearisation, res.solutions.front().trace};
            } else {
                auto res = plan_state(pp, budget);
                outcome = res.outcome;
                row.stats = res.stats;
                if (!res.plans.empty()) plan = res.plans.front();
            }
            switch (outcome) {
                case SearchOutcome::Solved: row.result = "solved"; break;
                case SearchOutcome::NoSolution: row.result = "no-solution"; break;
                case SearchOutcome::BudgetExhausted: row.result = "budget"; break;
            }
            if (outcome == SearchOutcome::Solved) {
                row.plan_length = static_cast<int>(plan.steps.size());
                row.validated = validate_plan(plan, pp).valid;
            }
        } catch (const std::exception&) {
            row.result = "error";
        }
        row.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace htn
