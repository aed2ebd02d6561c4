#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "spnperf/errors.hpp"
#include "spnperf/guard.hpp"

namespace spnperf {

enum class Backend { Simulation, Solver };

// Token-count distribution for one place. For the solver the histogram is the
// exact stationary distribution; for the simulator it is time-weighted over the
// observation window. Index i = probability of exactly i tokens; counts at or
// above the tracking cap are folded into the last bin and `truncated` is set.
struct PlaceStats {
    double mean = 0.0;
    double half_width = 0.0;  // 0 for the solver
    std::vector<double> histogram;
    bool truncated = false;
};

struct TransitionStats {
    double rate_per_ms = 0.0;  // firings per ms over the observation window
    double half_width = 0.0;   // 0 for the solver
    double firings = 0.0;      // expected/observed count; 0 for the solver
};

// Probability that a marking predicate holds (time-weighted / stationary).
struct PredicateStats {
    std::string name;
    double probability = 0.0;
    double half_width = 0.0;
};

struct TrackedPredicate {
    std::string name;
    std::string guard;  // same grammar as transition guards
};

struct EvaluationResult {
    Backend backend = Backend::Simulation;
    double observed_time_ms = 0.0;  // simulated span past warmup; 0 for solver

    std::vector<std::string> place_ids;  // net declaration order
    std::vector<PlaceStats> places;
    std::vector<std::string> transition_ids;
    std::vector<TransitionStats> transitions;
    std::vector<PredicateStats> predicates;

    bool nonconverged = false;         // simulation: every CI still too wide
    bool histogram_truncated = false;  // any place hit the tracking cap
    bool reducible = false;            // solver: transient states were dropped

    const PlaceStats& place(std::string_view id) const {
        for (std::size_t i = 0; i < place_ids.size(); ++i) {
            if (place_ids[i] == id) return places[i];
        }
        throw UnknownIdError("no statistics for place '" + std::string(id) + "'", std::string(id));
    }
    const TransitionStats& transition(std::string_view id) const {
        for (std::size_t i = 0; i < transition_ids.size(); ++i) {
            if (transition_ids[i] == id) return transitions[i];
        }
        throw UnknownIdError("no statistics for transition '" + std::string(id) + "'",
                             std::string(id));
    }
    const PredicateStats& predicate(std::string_view name) const {
        for (const PredicateStats& p : predicates) {
            if (p.name == name) return p;
        }
        throw UnknownIdError("no statistics for predicate '" + std::string(name) + "'",
                             std::string(name));
    }

    double place_mean(std::string_view id) const { return place(id).mean; }
    double firing_rate(std::string_view id) const { return transition(id).rate_per_ms; }
};

}  // namespace spnperf
