#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "htn/bench.hpp"
#include "htn/domain_io.hpp"
#include "htn/generate.hpp"
#include "htn/oracle.hpp"
#include "htn/plan_engine.hpp"
#include "htn/state_engine.hpp"
#include "htn/validate.hpp"

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitNoSolution = 1;
constexpr int kExitBudget = 2;
constexpr int kExitInput = 3;

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void print_errors(const std::vector<htn::ParseError>& errors) {
    for (const auto& e : errors) std::cerr << e.span.to_string() << ": " << e.message << "\n";
}

// Loads and parses both input files; exits with kExitInput on failure.
std::optional<htn::PlanningProblem> load(const std::string& domain_path,
                                         const std::string& problem_path) {
    auto dtext = read_file(domain_path);
    if (!dtext) {
        std::cerr << "cannot read " << domain_path << "\n";
        return std::nullopt;
    }
    auto dp = htn::parse_domain(*dtext, domain_path);
    if (!dp.ok()) {
        print_errors(dp.errors);
        return std::nullopt;
    }
    auto ptext = read_file(problem_path);
    if (!ptext) {
        std::cerr << "cannot read " << problem_path << "\n";
        return std::nullopt;
    }
    auto pb = htn::parse_problem(*ptext, *dp.domain, problem_path);
    if (!pb.ok()) {
        print_errors(pb.errors);
        return std::nullopt;
    }
    return htn::PlanningProblem{*dp.domain, *pb.problem};
}

int outcome_code(htn::SearchOutcome outcome) {
    switch (outcome) {
        case htn::SearchOutcome::Solved: return kExitSolved;
        case htn::SearchOutcome::NoSolution: return kExitNoSolution;
        case htn::SearchOutcome::BudgetExhausted: return kExitBudget;
    }
    return kExitInput;
}

std::string threat_line(const htn::ThreatLogEntry& e) {
    std::ostringstream out;
    switch (e.threat.kind) {
        case htn::ThreatKind::DeletedCondition: out << "deleted-condition"; break;
        case htn::ThreatKind::DoubleCross: out << "double-cross"; break;
        case htn::ThreatKind::Resource: out << "resource"; break;
    }
    out << " clobberer=t" << e.threat.clobberer << " victim=t" << e.threat.victim;
    if (e.threat.producer != htn::kInitTask) out << " producer=t" << e.threat.producer;
    out << " predicate=" << e.threat.predicate.to_string() << " -> " << e.action;
    return out.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dual-engine hierarchical task network planning toolkit"};
    app.require_subcommand(1);

    // solve
    std::string domain_path, problem_path, engine_flag, style_flag, format = "text";
    long budget_flag = -1;
    bool all_solutions = false, explain = false, revalidate = false;
    auto* solve = app.add_subcommand("solve", "plan for a problem");
    solve->add_option("domain", domain_path)->required();
    solve->add_option("problem", problem_path)->required();
    solve->add_option("--engine", engine_flag)->check(CLI::IsMember({"state", "plan"}));
    solve->add_option("--style", style_flag)->check(CLI::IsMember({"totd", "utd", "potd"}));
    solve->add_option("--budget", budget_flag, "max decompositions");
    solve->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
    solve->add_flag("--all-solutions", all_solutions);
    solve->add_flag("--explain", explain, "print the threat log to stderr");
    solve->add_flag("--validate", revalidate, "re-check the plan before printing");

    // validate
    std::string plan_path;
    auto* validate = app.add_subcommand("validate", "replay a serialized plan");
    validate->add_option("domain", domain_path)->required();
    validate->add_option("problem", problem_path)->required();
    validate->add_option("plan", plan_path, "plan JSON file")->required();

    // oracle
    int depth_bound = 64;
    auto* oracle = app.add_subcommand("oracle", "brute-force plan enumeration");
    oracle->add_option("domain", domain_path)->required();
    oracle->add_option("problem", problem_path)->required();
    oracle->add_option("--depth", depth_bound);

    // gen-logistics
    int boxes = 1, cities = 2, locs = 2;
    unsigned seed = 7;
    std::string domain_out, problem_out;
    auto* gen = app.add_subcommand("gen-logistics", "generate a logistics instance");
    gen->add_option("--boxes", boxes)->check(CLI::PositiveNumber);
    gen->add_option("--cities", cities)->check(CLI::PositiveNumber);
    gen->add_option("--locs", locs)->check(CLI::PositiveNumber);
    gen->add_option("--seed", seed);
    gen->add_option("--domain-out", domain_out);
    gen->add_option("--problem-out", problem_out);

    // bench
    int max_boxes = 5;
    std::string bench_engine = "state";
    auto* bench = app.add_subcommand("bench", "sweep generated problems");
    bench->add_option("--max-boxes", max_boxes)->check(CLI::PositiveNumber);
    bench->add_option("--cities", cities)->check(CLI::PositiveNumber);
    bench->add_option("--locs", locs)->check(CLI::PositiveNumber);
    bench->add_option("--seed", seed);
    bench->add_option("--engine", bench_engine)->check(CLI::IsMember({"state", "plan"}));
    bench->add_option("--budget", budget_flag);
    bench->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    // classify
    auto* classify = app.add_subcommand("classify", "structural domain settings");
    classify->add_option("domain", domain_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitInput;
    }

    try {
        if (solve->parsed()) {
            auto pp = load(domain_path, problem_path);
            if (!pp) return kExitInput;
            if (engine_flag == "state") pp->problem.engine = htn::Engine::State;
            if (engine_flag == "plan") pp->problem.engine = htn::Engine::Plan;
            if (style_flag == "totd") pp->problem.style = htn::Style::TOTD;
            if (style_flag == "utd") pp->problem.style = htn::Style::UTD;
            if (style_flag == "potd") pp->problem.style = htn::Style::POTD;
            htn::Budget budget = pp->problem.budget;
            if (budget_flag > 0) budget.max_decompositions = budget_flag;

            std::vector<htn::Plan> plans;
            htn::SearchStats stats;
            htn::SearchOutcome outcome;
            std::optional<htn::SolutionNetworkInfo> network;
            if (pp->problem.engine == htn::Engine::Plan) {
                htn::PlanEngineOptions opts;
                opts.all_solutions = all_solutions;
                auto res = htn::plan_po(*pp, budget, opts);
                outcome = res.outcome;
                stats = res.stats;
                for (const auto& sol : res.solutions)
                    plans.push_back({sol.linearisation, sol.trace});
                if (!res.solutions.empty()) network = res.solutions.front();
                if (explain)
                    for (const auto& e : res.threat_log)
                        std::cerr << threat_line(e) << "\n";
            } else {
                htn::StateEngineOptions opts;
                opts.all_solutions = all_solutions;
                auto res = htn::plan_state(*pp, budget, opts);
                outcome = res.outcome;
                stats = res.stats;
                plans = res.plans;
            }
            if (revalidate)
                for (const auto& plan : plans) {
                    auto v = htn::validate_plan(plan, *pp);
                    if (!v.valid) {
                        std::cerr << "internal error: emitted plan fails validation at step "
                                  << v.step_index << ": " << v.reason << "\n";
                        return kExitInput;
                    }
                }
            for (const auto& plan : plans) {
                if (format == "json")
                    std::cout << htn::serialize_plan_json(plan, stats,
                                                          network ? &*network : nullptr);
                else std::cout << htn::serialize_plan_text(plan);
                if (all_solutions && format == "text") std::cout << "--\n";
            }
            return outcome_code(outcome);
        }

        if (validate->parsed()) {
            auto pp = load(domain_path, problem_path);
            if (!pp) return kExitInput;
            auto ptext = read_file(plan_path);
            if (!ptext) {
                std::cerr << "cannot read " << plan_path << "\n";
                return kExitInput;
            }
            std::string err;
            auto plan = htn::parse_plan_json(*ptext, &err);
            if (!plan) {
                std::cerr << err << "\n";
                return kExitInput;
            }
            auto v = htn::validate_plan(*plan, *pp);
            if (v.valid) {
                std::cout << "valid\n";
                return kExitSolved;
            }
            std::cout << "invalid at step " << v.step_index << ": " << v.reason << "\n";
            return kExitNoSolution;
        }

        if (oracle->parsed()) {
            auto pp = load(domain_path, problem_path);
            if (!pp) return kExitInput;
            auto res = htn::oracle_enumerate(*pp, depth_bound);
            std::cout << res.plans.size() << " plan(s)"
                      << (res.complete ? "" : " [incomplete: depth bound hit]") << "\n";
            for (const auto& steps : res.plans) {
                for (size_t i = 0; i < steps.size(); ++i)
                    std::cout << i << ": " << steps[i].to_string() << "\n";
                std::cout << "--\n";
            }
            if (!res.complete) return kExitBudget;
            return res.plans.empty() ? kExitNoSolution : kExitSolved;
        }

        if (gen->parsed()) {
            auto g = htn::gen_logistics(boxes, cities, locs, seed);
            if (domain_out.empty()) std::cout << g.domain_text;
            else std::ofstream(domain_out, std::ios::binary) << g.domain_text;
            if (problem_out.empty()) std::cout << g.problem_text;
            else std::ofstream(problem_out, std::ios::binary) << g.problem_text;
            return kExitSolved;
        }

        if (bench->parsed()) {
            htn::Budget budget;
            if (budget_flag > 0) budget.max_decompositions = budget_flag;
            auto report = htn::run_bench(max_boxes, cities, locs, seed, bench_engine, budget);
            std::cout << (format == "json" ? report.to_json() : report.to_text());
            for (const auto& row : report.rows)
                if (row.result != "solved") return kExitNoSolution;
            return kExitSolved;
        }

        if (classify->parsed()) {
            auto dtext = read_file(domain_path);
            if (!dtext) {
                std::cerr << "cannot read " << domain_path << "\n";
                return kExitInput;
            }
            auto dp = htn::parse_domain(*dtext, domain_path);
            if (!dp.ok()) {
                print_errors(dp.errors);
                return kExitInput;
            }
            std::cout << htn::classify_domain(*dp.domain).to_string() << "\n";
            return kExitSolved;
        }
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
