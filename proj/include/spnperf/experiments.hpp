#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "spnperf/hlf.hpp"
#include "spnperf/result.hpp"
#include "spnperf/simulate.hpp"
#include "spnperf/solver.hpp"

namespace spnperf {

struct SweepAxis {
    std::string param;           // HlfParams field name, e.g. "arrival_delay_ms"
    std::vector<double> values;  // integer fields get rounded values
};

struct SweepSpec {
    std::string name = "sweep";
    HlfParams base;
    std::vector<SweepAxis> axes;  // cartesian product, last axis fastest
    Backend backend = Backend::Simulation;
    SimConfig sim;       // sim.seed is the master seed
    SolveConfig solver;
    std::vector<std::string> metrics;  // empty = all hlf metrics

    void validate() const;
};

struct SweepRow {
    std::vector<double> point;  // one value per axis
    HlfParams params;
    HlfMetrics metrics;
    bool failed = false;
    std::string error;
    bool nonconverged = false;
    bool reducible = false;
};

struct SweepResult {
    std::vector<std::string> axis_names;
    std::vector<SweepRow> rows;  // deterministic cartesian order
};

// Evaluates every grid point, concurrently up to `workers`, with per-point
// seeds derived from the master seed so results do not depend on scheduling.
SweepResult run_sweep(const SweepSpec& s, int workers);

struct DoeFactor {
    std::string param;
    double low = 0.0;
    double high = 0.0;
};

struct DoeSpec {
    std::string name = "doe";
    HlfParams base;
    std::vector<DoeFactor> factors;  // 2..6
    std::string response = "mrt_ms";
    int replications = 3;  // simulation backend cell replications
    Backend backend = Backend::Simulation;
    SimConfig sim;
    SolveConfig solver;

    void validate() const;
};

struct Effect {
    std::string name;             // "A", "A*B", ... using factor param names
    std::vector<int> factors;     // indices of involved factors
    double value = 0.0;           // signed effect
    double percent = 0.0;         // share of total variation
};

struct EffectsTable {
    double q0 = 0.0;                     // grand mean response
    std::vector<Effect> effects;         // sorted by percent, descending
    std::vector<double> cell_responses;  // 2^k responses, factor 0 fastest bit
};

// Sign-table effects from responses in standard order: cell i has factor j at
// its high level iff bit j of i is set.
EffectsTable compute_effects(const std::vector<std::string>& factor_names,
                             const std::vector<double>& responses);

EffectsTable doe_2k(const DoeSpec& d, int workers);

struct InteractionRow {
    double timeout_ms = 0.0;
    double block_call_rate = 0.0;
    double timeout_call_rate = 0.0;
};

struct InteractionProfile {
    std::vector<InteractionRow> rows;
    int first_crossing = -1;  // first row index with block rate >= timeout rate
};

InteractionProfile interaction_profile(const HlfParams& base, const std::vector<double>& timeouts,
                                       Backend backend, const SimConfig& sim,
                                       const SolveConfig& solver, int workers);

SweepSpec sweep_spec_from_json(const nlohmann::json& j);
DoeSpec doe_spec_from_json(const nlohmann::json& j);

// Applies one swept parameter to a copy of the base params (integer fields are
// rounded). Unknown names raise UnknownIdError.
HlfParams apply_param(const HlfParams& base, const std::string& name, double value);

// Per-point RNG seed: a fixed 64-bit mix of the master seed and point index so
// grid evaluation order never affects results.
std::uint64_t seed_for_point(std::uint64_t master, std::uint64_t index);

// Worker-pool size: explicit override > SPNPERF_WORKERS > hardware concurrency.
int resolve_workers(int requested);

}  // namespace spnperf
