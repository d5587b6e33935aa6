#pragma once

#include <string>
#include <vector>

#include "htn/core.hpp"
#include "htn/state_engine.hpp"  // SearchOutcome

namespace htn {

constexpr int kInitTask = -1;  // pseudo-producer for facts of s_0

enum class ThreatKind { DeletedCondition, DoubleCross, Resource };

struct Threat {
    ThreatKind kind;
    int clobberer = kInitTask;
    int victim = kInitTask;       // consumer (pair partner for double-cross)
    int producer = kInitTask;     // deleted-condition only
    Predicate predicate;

    bool operator==(const Threat&) const = default;
};

struct CausalLink {
    int producer = kInitTask;  // task id or kInitTask
    int consumer = 0;
    Predicate predicate;

    bool operator==(const CausalLink&) const = default;
};

// A pending establishment obligation: pred must hold in the state
// immediately preceding the task.
struct Obligation {
    Predicate pred;
    int task = 0;

    bool operator==(const Obligation&) const = default;
};

struct RefinementNode {
    TaskNetwork network;
    std::vector<CausalLink> links;
    std::vector<Obligation> agenda;
    std::vector<DecompositionRecord> trace;
    int depth = 0;
};

// One line of --explain output: a detected threat and what was done.
struct ThreatLogEntry {
    Threat threat;
    std::string action;
};

struct SolutionNetworkInfo {
    TaskNetwork network;
    std::vector<CausalLink> links;
    std::vector<GroundStep> linearisation;  // noop steps dropped
    std::vector<DecompositionRecord> trace;
};

struct PlanSearchResult {
    SearchOutcome outcome = SearchOutcome::NoSolution;
    std::vector<SolutionNetworkInfo> solutions;
    SearchStats stats;
    std::vector<ThreatLogEntry> threat_log;
    bool complete = true;
};

struct PlanEngineOptions {
    bool all_solutions = false;
};

// Harmful interactions in the node's network. Double-crossed pairs are
// reported once and excluded from the deleted-condition listing.
std::vector<Threat> detect_interactions(const RefinementNode& n, const Domain& d,
                                        const State& s0);

// Children resolving th: promotion, demotion, or a separating binding.
// Empty for double-cross (backtrack). Throws for resource threats.
std::vector<RefinementNode> resolve_threat(const RefinementNode& n, const Threat& th,
                                           const Domain& d);

// Children linking each candidate establisher of the obligation:
// INIT when the predicate unifies with a fact of s0, or any task whose
// positive effect unifies. Never inserts tasks.
std::vector<RefinementNode> establish(const Obligation& c, const RefinementNode& n,
                                      const Domain& d, const State& s0);

// Transitive ordering closure, binding congruence (union-find), cycle
// and equality/inequality contradiction detection, folding of decided
// variables into task arguments. Returns false on inconsistency.
bool propagate(RefinementNode& n);

enum class SimplifyOutcome { Kept, Pruned };

// Removes constraints decidable at the current level of detail, prunes
// on falsified ones, keeps the undecidable rest.
SimplifyOutcome simplify(RefinementNode& n, const Domain& d, const State& s0);

struct Linearisation {
    std::vector<int> order;          // task ids, noop included
    std::vector<GroundStep> steps;   // noop dropped
    std::vector<State> states;
};

class NonGroundNetwork : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// First topological order (stable by task id, backtracking) whose
// operator sequence is executable in s0 and satisfies the network's
// state constraints. nullopt if all linearisations fail.
std::optional<Linearisation> linearise(const TaskNetwork& tn, const Domain& d, const State& s0);

PlanSearchResult plan_po(const PlanningProblem& pp, const Budget& budget,
                         const PlanEngineOptions& opts = {});

}  // namespace htn
