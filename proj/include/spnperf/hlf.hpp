#pragma once

#include <string>

#include "json.hpp"
#include "spnperf/net.hpp"
#include "spnperf/result.hpp"

namespace spnperf {

// Parameters of the Hyperledger Fabric transaction-processing model: a
// three-phase pipeline (endorsement on two nodes, single-node ordering with
// block assembly, commit broadcast to two nodes) with bounded queues and
// processor pools per phase, plus the two ordering knobs: block size and the
// partial-block timeout.
struct HlfParams {
    double arrival_delay_ms = 10.0;  // deterministic inter-arrival time
    int block_size = 1;
    double timeout_ms = 10000.0;

    int eq = 100;  // endorsement queue capacity (per node)
    int ep = 6;    // endorsement processors (per node)
    int oq = 100;  // ordering queue capacity
    int op = 6;    // ordering processors
    int cq = 100;  // commit queue capacity (per node)
    int cp = 6;    // commit processors (per node)

    double te1_ms = 5.0;   // endorsement service, node 1
    double te2_ms = 5.0;   // endorsement service, node 2
    double te3_ms = 5.0;   // block assembly per transaction
    double te4_ms = 2.0;   // complete-block processing
    double te5_ms = 2.0;   // partial-block processing
    double te6_ms = 10.0;  // commit broadcast
    double te7_ms = 80.0;  // commit service, node 1
    double te8_ms = 80.0;  // commit service, node 2

    void validate() const;  // throws ValidationError
};

HlfParams hlf_params_from_json(const nlohmann::json& j);
nlohmann::json hlf_params_to_json(const HlfParams& p);

// True when the JSON document looks like HlfParams rather than a raw net.
bool is_hlf_params_json(const nlohmann::json& j);

PetriNet build_hlf_net(const HlfParams& p);

// Joint condition under which an arriving transaction is discarded: both
// endorsement queues full, i.e. neither free-capacity place has tokens.
TrackedPredicate hlf_discard_predicate();

struct HlfMetrics {
    double mrt_ms = 0.0;
    double throughput_per_ms = 0.0;
    double util_endorsement = 0.0;
    double util_ordering = 0.0;
    double util_commit = 0.0;
    double discard_probability = 0.0;
    double block_call_rate_per_ms = 0.0;
    double timeout_call_rate_per_ms = 0.0;
    double transactions_in_progress = 0.0;
};

double transactions_in_progress(const EvaluationResult& r, const HlfParams& p);
double mrt_ms(const EvaluationResult& r, const HlfParams& p);
double utilization(const EvaluationResult& r, const HlfParams& p, const std::string& phase);
double discard_probability(const EvaluationResult& r);
double throughput_per_ms(const EvaluationResult& r, const HlfParams& p);
double block_call_rate(const EvaluationResult& r, const HlfParams& p);
double timeout_call_rate(const EvaluationResult& r, const HlfParams& p);

HlfMetrics compute_hlf_metrics(const EvaluationResult& r, const HlfParams& p);

// Metric column order used by CSV output and the CLI summary.
const std::vector<std::string>& hlf_metric_names();
double hlf_metric_value(const HlfMetrics& m, const std::string& name);

}  // namespace spnperf
