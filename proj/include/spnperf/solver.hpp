#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "spnperf/net.hpp"
#include "spnperf/result.hpp"

namespace spnperf {

struct ReachabilityGraph {
    struct Edge {
        std::int32_t from = 0;
        std::int32_t to = 0;
        std::int32_t transition = 0;  // index into net.transitions()
        double value = 0.0;           // rate (tangible source) or weight (vanishing source)
    };
    std::vector<Marking> states;
    std::vector<bool> vanishing;  // per state
    std::vector<Edge> edges;      // grouped by source state
    std::vector<std::int32_t> edge_begin;  // states.size()+1 offsets into edges
    std::int32_t initial = 0;

    int tangible_count() const {
        int n = 0;
        for (bool v : vanishing) n += !v;
        return n;
    }
};

// CTMC over the tangible states. Generator off-diagonal entries are kept in
// row-compressed form; self-loops produced by elimination are dropped from the
// entries but still counted in total_exit_rate so outflow is preserved.
struct Ctmc {
    struct Entry {
        std::int32_t to = 0;
        double rate = 0.0;
    };
    std::vector<Marking> markings;        // tangible markings, solver order
    std::vector<Entry> entries;
    std::vector<std::int32_t> row_begin;  // markings.size()+1 offsets
    std::vector<double> total_exit_rate;  // per state, before self-loop drop
    std::int32_t initial = 0;

    // Maps between solver states and ReachabilityGraph states, for metric
    // extraction that needs the original edges (firing rates per transition).
    std::vector<std::int32_t> graph_state;    // ctmc index -> graph index
    std::vector<std::int32_t> ctmc_index;     // graph index -> ctmc index (-1 vanishing)
};

// Breadth-first reachability from the initial marking. Every timed transition
// must be exponential (expand deterministic ones first). Throws
// StateSpaceExceededError past max_states, VanishingLoopError on an immediate
// cycle with no exit.
ReachabilityGraph explore(const PetriNet& net, std::int64_t max_states);

// Folds vanishing states away, redistributing incoming rates over the
// weight-normalized immediate successors, transitively.
Ctmc eliminate_vanishing(const ReachabilityGraph& g);

struct SteadyStateResult {
    std::vector<double> pi;
    bool reducible = false;  // transient states were present; mass confined to bottom class
};

// Gauss-Seidel on the balance equations with normalization; accepts only when
// the global-balance residual max-norm is <= tol, else NonconvergenceError.
SteadyStateResult steady_state(const Ctmc& c, double tol, std::int64_t max_iter);

// Replaces each deterministic transition (delay d) with an Erlang-k chain of
// exponential stages of mean d/k behind a mutex place; the final stage reuses
// the original transition id so firing-rate lookups keep working. k=1 turns
// the transition into a plain exponential. Start of service follows enabling
// (guards and input arcs gate the entry stage).
PetriNet erlang_expand(const PetriNet& net, int phases);

struct SolveConfig {
    std::int64_t max_states = 2'000'000;
    double tol = 1e-10;
    std::int64_t max_iter = 2'000'000;
    int erlang_k = 20;  // used by callers that expand before solving
    int max_tracked_tokens = 200;
    std::vector<std::string> tracked_places;  // empty = all
    std::vector<TrackedPredicate> predicates;
};

// explore -> eliminate_vanishing -> steady_state, then expectation extraction.
// Requires an exponential-only net (erlang_expand deterministic nets first).
EvaluationResult evaluate_exact(const PetriNet& net, const SolveConfig& cfg = {});

}  // namespace spnperf
