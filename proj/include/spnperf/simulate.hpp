#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spnperf/net.hpp"
#include "spnperf/result.hpp"

namespace spnperf {

// Steady-state estimation by one long run split into batches after a warmup.
// The run spans exactly warmup_time_ms + batch_count * batch_length_ms of
// simulated time; max_time_ms is a sanity cap validated against that span.
struct SimConfig {
    std::uint64_t seed = 1;
    double warmup_time_ms = 0.0;
    int batch_count = 30;
    double batch_length_ms = 0.0;
    double max_time_ms = 0.0;
    double confidence_level = 0.95;
    std::vector<std::string> tracked_places;  // empty = all places
    int max_tracked_tokens = 200;             // histogram cap K, bins 0..K
    std::vector<TrackedPredicate> predicates;
};

// Event-driven GSPN simulation. Exponential delays are memoryless and
// resampled in every tangible marking at rate enabling_degree/mean.
// Deterministic transitions keep their remaining delay while continuously
// enabled (race-enable) and reset it when disabled or fired; zero-time
// enabling blips inside an immediate cascade do not reset the timer.
// Immediate conflicts resolve by priority, then weighted random choice.
// More than 10^6 consecutive zero-time firings raise VanishingLoopError.
EvaluationResult simulate(const PetriNet& net, const SimConfig& cfg);

}  // namespace spnperf
