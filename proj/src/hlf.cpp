#include "spnperf/hlf.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "spnperf/errors.hpp"

namespace spnperf {
namespace {

void require_positive(double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw ValidationError(std::string(field) + " must be positive");
}

void require_capacity(int v, const char* field) {
    if (v < 1) throw ValidationError(std::string(field) + " must be at least 1");
}

}  // namespace

void HlfParams::validate() const {
    require_positive(arrival_delay_ms, "arrival_delay_ms");
    require_capacity(block_size, "block_size");
    require_positive(timeout_ms, "timeout_ms");
    require_capacity(eq, "eq");
    require_capacity(ep, "ep");
    require_capacity(oq, "oq");
    require_capacity(op, "op");
    require_capacity(cq, "cq");
    require_capacity(cp, "cp");
    require_positive(te1_ms, "te1_ms");
    require_positive(te2_ms, "te2_ms");
    require_positive(te3_ms, "te3_ms");
    require_positive(te4_ms, "te4_ms");
    require_positive(te5_ms, "te5_ms");
    require_positive(te6_ms, "te6_ms");
    require_positive(te7_ms, "te7_ms");
    require_positive(te8_ms, "te8_ms");
}

namespace {

const std::vector<std::string>& param_keys() {
    static const std::vector<std::string> keys = {
        "arrival_delay_ms", "block_size", "timeout_ms", "eq",     "ep",     "oq",
        "op",               "cq",         "cp",         "te1_ms", "te2_ms", "te3_ms",
        "te4_ms",           "te5_ms",     "te6_ms",     "te7_ms", "te8_ms"};
    return keys;
}

double as_param_number(const nlohmann::json& j, const std::string& key) {
    if (!j.at(key).is_number())
        throw ValidationError("parameter '" + key + "' must be a number");
    return j.at(key).get<double>();
}

int as_param_int(const nlohmann::json& j, const std::string& key) {
    if (!j.at(key).is_number_integer())
        throw ValidationError("parameter '" + key + "' must be an integer");
    return j.at(key).get<int>();
}

}  // namespace

HlfParams hlf_params_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("parameter file must hold a JSON object");
    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (const std::string& k : param_keys()) known = known || k == key;
        if (!known) throw ValidationError("unknown parameter '" + key + "'");
    }
    HlfParams p;
    if (j.contains("arrival_delay_ms")) p.arrival_delay_ms = as_param_number(j, "arrival_delay_ms");
    if (j.contains("block_size")) p.block_size = as_param_int(j, "block_size");
    if (j.contains("timeout_ms")) p.timeout_ms = as_param_number(j, "timeout_ms");
    if (j.contains("eq")) p.eq = as_param_int(j, "eq");
    if (j.contains("ep")) p.ep = as_param_int(j, "ep");
    if (j.contains("oq")) p.oq = as_param_int(j, "oq");
    if (j.contains("op")) p.op = as_param_int(j, "op");
    if (j.contains("cq")) p.cq = as_param_int(j, "cq");
    if (j.contains("cp")) p.cp = as_param_int(j, "cp");
    if (j.contains("te1_ms")) p.te1_ms = as_param_number(j, "te1_ms");
    if (j.contains("te2_ms")) p.te2_ms = as_param_number(j, "te2_ms");
    if (j.contains("te3_ms")) p.te3_ms = as_param_number(j, "te3_ms");
    if (j.contains("te4_ms")) p.te4_ms = as_param_number(j, "te4_ms");
    if (j.contains("te5_ms")) p.te5_ms = as_param_number(j, "te5_ms");
    if (j.contains("te6_ms")) p.te6_ms = as_param_number(j, "te6_ms");
    if (j.contains("te7_ms")) p.te7_ms = as_param_number(j, "te7_ms");
    if (j.contains("te8_ms")) p.te8_ms = as_param_number(j, "te8_ms");
    p.validate();
    return p;
}

nlohmann::json hlf_params_to_json(const HlfParams& p) {
    return nlohmann::json{{"arrival_delay_ms", p.arrival_delay_ms},
                          {"block_size", p.block_size},
                          {"timeout_ms", p.timeout_ms},
                          {"eq", p.eq},
                          {"ep", p.ep},
                          {"oq", p.oq},
                          {"op", p.op},
                          {"cq", p.cq},
                          {"cp", p.cp},
                          {"te1_ms", p.te1_ms},
                          {"te2_ms", p.te2_ms},
                          {"te3_ms", p.te3_ms},
                          {"te4_ms", p.te4_ms},
                          {"te5_ms", p.te5_ms},
                          {"te6_ms", p.te6_ms},
                          {"te7_ms", p.te7_ms},
                          {"te8_ms", p.te8_ms}};
}

bool is_hlf_params_json(const nlohmann::json& j) {
    return j.is_object() && !j.contains("places") && !j.contains("transitions");
}

PetriNet build_hlf_net(const HlfParams& p) {
    p.validate();
    NetBuilder b;

    // arrival and the two endorsement nodes
    b.place("P_GT", 0);
    b.place("eq1_1", p.eq).place("EQ_1", 0).place("ep1_1", p.ep).place("EP_1", 0);
    b.place("eq1_2", p.eq).place("EQ_2", 0).place("ep1_2", p.ep).place("EP_2", 0);

    // ordering: queue, processors, assembled transactions, block cutting
    b.place("oq_1", p.oq).place("OQ_1", 0).place("op_1", p.op).place("OP_1", 0);
    b.place("OPF3_1", 0).place("Draining", 0);
    b.place("OPF4_1_1", 0).place("OPF4_1_2", 0).place("OPF5_1", 0);
    b.place("Clock", 1).place("TO_FINISH", 0);

    // the two commit nodes
    b.place("cq1_1", p.cq).place("CQ_1", 0).place("cp1_1", p.cp).place("CPF_1", 0);
    b.place("cq1_2", p.cq).place("CQ_2", 0).place("cp1_2", p.cp).place("CPF_2", 0);

    // client arrivals, then random routing to whichever endorsement queue has
    // room; a transaction is discarded only when both queues are full
    b.deterministic("AD", p.arrival_delay_ms);
    b.arc("AD", "P_GT");
    b.immediate("TI1", 1.0, 2);
    b.arc("P_GT", "TI1").arc("eq1_1", "TI1").arc("TI1", "EQ_1");
    b.immediate("TI3", 1.0, 2);
    b.arc("P_GT", "TI3").arc("eq1_2", "TI3").arc("TI3", "EQ_2");
    b.immediate("T_DISCARD", 1.0, 1);
    b.arc("P_GT", "T_DISCARD");

    // endorsement service on each node; admission frees the queue slot
    b.immediate("TI2", 1.0, 2);
    b.arc("EQ_1", "TI2").arc("ep1_1", "TI2").arc("TI2", "EP_1").arc("TI2", "eq1_1");
    b.immediate("TI4", 1.0, 2);
    b.arc("EQ_2", "TI4").arc("ep1_2", "TI4").arc("TI4", "EP_2").arc("TI4", "eq1_2");
    b.exponential("TE1", p.te1_ms, "", ServerSemantics::Infinite);
    b.arc("EP_1", "TE1").arc("oq_1", "TE1").arc("TE1", "ep1_1").arc("TE1", "OQ_1");
    b.exponential("TE2", p.te2_ms, "", ServerSemantics::Infinite);
    b.arc("EP_2", "TE2").arc("oq_1", "TE2").arc("TE2", "ep1_2").arc("TE2", "OQ_1");

    // ordering service: per-transaction assembly into OPF3_1
    b.immediate("TI5", 1.0, 2);
    b.arc("OQ_1", "TI5").arc("op_1", "TI5").arc("TI5", "OP_1").arc("TI5", "oq_1");
    b.exponential("TE3", p.te3_ms, "", ServerSemantics::Infinite);
    b.arc("OP_1", "TE3").arc("TE3", "OPF3_1");

    // complete block: block_size assembled transactions fold into one block
    // token that keeps one processor slot; the rest are released
    b.immediate("TI6", 1.0, 5, "#OPF3_1>0");
    b.arc("OPF3_1", "TI6", p.block_size).arc("TI6", "OPF4_1_1");
    if (p.block_size > 1) b.arc("TI6", "op_1", p.block_size - 1);

    // partial block on timeout: drain whatever is assembled, one token at a
    // time, then close the block (which reclaims one processor slot)
    b.immediate("TI7", 1.0, 4, "(#TO_FINISH=1)AND(#OPF3_1>0)");
    b.arc("TO_FINISH", "TI7").arc("TI7", "Draining").arc("TI7", "Clock");
    b.immediate("TI7_DRAIN", 1.0, 4);
    b.arc("OPF3_1", "TI7_DRAIN").arc("Draining", "TI7_DRAIN");
    b.arc("TI7_DRAIN", "Draining").arc("TI7_DRAIN", "op_1");
    b.immediate("TI7_CLOSE", 1.0, 4, "#OPF3_1=0");
    b.arc("Draining", "TI7_CLOSE").arc("op_1", "TI7_CLOSE").arc("TI7_CLOSE", "OPF4_1_2");

    // timeout clock; a block already in broadcast also restarts it
    b.deterministic("TE9", p.timeout_ms);
    b.arc("Clock", "TE9").arc("TE9", "TO_FINISH");
    b.immediate("TI10", 1.0, 3, "#OPF5_1>0");
    b.arc("TO_FINISH", "TI10").arc("TI10", "Clock");

    // block post-processing, then broadcast to both commit queues; broadcast
    // releases the processor slot the block was holding
    b.exponential("TE4", p.te4_ms, "#OPF4_1_1>0", ServerSemantics::Infinite);
    b.arc("OPF4_1_1", "TE4").arc("TE4", "OPF5_1");
    b.exponential("TE5", p.te5_ms, "#OPF4_1_2>0", ServerSemantics::Infinite);
    b.arc("OPF4_1_2", "TE5").arc("TE5", "OPF5_1");
    b.exponential("TE6", p.te6_ms, "#OPF5_1>0", ServerSemantics::Infinite);
    b.arc("OPF5_1", "TE6").arc("cq1_1", "TE6").arc("cq1_2", "TE6");
    b.arc("TE6", "CQ_1").arc("TE6", "CQ_2").arc("TE6", "op_1");

    // commit on each node
    b.immediate("TI8", 1.0, 2);
    b.arc("CQ_1", "TI8").arc("cp1_1", "TI8").arc("TI8", "CPF_1").arc("TI8", "cq1_1");
    b.immediate("TI9", 1.0, 2);
    b.arc("CQ_2", "TI9").arc("cp1_2", "TI9").arc("TI9", "CPF_2").arc("TI9", "cq1_2");
    b.exponential("TE7", p.te7_ms, "", ServerSemantics::Infinite);
    b.arc("CPF_1", "TE7").arc("TE7", "cp1_1");
    b.exponential("TE8", p.te8_ms, "", ServerSemantics::Infinite);
    b.arc("CPF_2", "TE8").arc("TE8", "cp1_2");

    return b.build("hlf");
}

TrackedPredicate hlf_discard_predicate() { return {"discard", "(#eq1_1=0)AND(#eq1_2=0)"}; }

namespace {

// Transactions per cut block and per timeout block, from the block-cutting
// firing rates. Full blocks carry block_size transactions; a timeout block
// carries however many tokens the drain loop moved.
struct BlockMix {
    double tx_per_block;    // weighted over both block kinds
    double tx_per_timeout;  // mean size of timeout blocks
};

BlockMix block_mix(const EvaluationResult& r, const HlfParams& p) {
    const double full = r.firing_rate("TI6");
    const double drained = r.firing_rate("TI7_DRAIN");
    const double closed = r.firing_rate("TI7_CLOSE");
    BlockMix mix;
    mix.tx_per_timeout = closed > 0.0 ? drained / closed : 0.0;
    const double blocks = full + closed;
    mix.tx_per_block =
        blocks > 0.0 ? (p.block_size * full + drained) / blocks : static_cast<double>(p.block_size);
    return mix;
}

}  // namespace

double transactions_in_progress(const EvaluationResult& r, const HlfParams& p) {
    const BlockMix mix = block_mix(r, p);
    double n = r.place_mean("P_GT");
    n += r.place_mean("EQ_1") + r.place_mean("EQ_2");
    n += r.place_mean("EP_1") + r.place_mean("EP_2");
    n += r.place_mean("OQ_1") + r.place_mean("OP_1") + r.place_mean("OPF3_1");
    n += p.block_size * r.place_mean("OPF4_1_1");
    n += mix.tx_per_timeout * r.place_mean("OPF4_1_2");
    n += mix.tx_per_block * r.place_mean("OPF5_1");
    // both commit nodes hold a copy of every block; count each block once
    n += mix.tx_per_block *
         (r.place_mean("CQ_1") + r.place_mean("CPF_1") + r.place_mean("CQ_2") +
          r.place_mean("CPF_2")) /
         2.0;
    return n;
}

double mrt_ms(const EvaluationResult& r, const HlfParams& p) {
    return transactions_in_progress(r, p) * p.arrival_delay_ms;
}

double utilization(const EvaluationResult& r, const HlfParams& p, const std::string& phase) {
    if (phase == "endorsement")
        return (r.place_mean("EP_1") + r.place_mean("EP_2")) / (2.0 * p.ep);
    if (phase == "ordering") return r.place_mean("OP_1") / p.op;
    if (phase == "commit")
        return (r.place_mean("CPF_1") + r.place_mean("CPF_2")) / (2.0 * p.cp);
    throw UnknownIdError("unknown phase '" + phase + "'", phase);
}

double discard_probability(const EvaluationResult& r) {
    return r.predicate("discard").probability;
}

double throughput_per_ms(const EvaluationResult& r, const HlfParams& p) {
    const BlockMix mix = block_mix(r, p);
    const double node1 = r.place_mean("CPF_1") / p.te7_ms;
    const double node2 = r.place_mean("CPF_2") / p.te8_ms;
    return mix.tx_per_block * (node1 + node2) / 2.0;
}

double block_call_rate(const EvaluationResult& r, const HlfParams& p) {
    return r.place_mean("OPF4_1_1") / p.te4_ms;
}

double timeout_call_rate(const EvaluationResult& r, const HlfParams& p) {
    return r.place_mean("OPF4_1_2") / p.te5_ms;
}

HlfMetrics compute_hlf_metrics(const EvaluationResult& r, const HlfParams& p) {
    HlfMetrics m;
    m.transactions_in_progress = transactions_in_progress(r, p);
    m.mrt_ms = mrt_ms(r, p);
    m.throughput_per_ms = throughput_per_ms(r, p);
    m.util_endorsement = utilization(r, p, "endorsement");
    m.util_ordering = utilization(r, p, "ordering");
    m.util_commit = utilization(r, p, "commit");
    m.discard_probability = discard_probability(r);
    m.block_call_rate_per_ms = block_call_rate(r, p);
    m.timeout_call_rate_per_ms = timeout_call_rate(r, p);
    return m;
}

const std::vector<std::string>& hlf_metric_names() {
    static const std::vector<std::string> names = {
        "mrt_ms",        "throughput_per_ms",     "util_endorsement",
        "util_ordering", "util_commit",           "discard_probability",
        "block_call_rate_per_ms", "timeout_call_rate_per_ms", "transactions_in_progress"};
    return names;
}

double hlf_metric_value(const HlfMetrics& m, const std::string& name) {
    if (name == "mrt_ms") return m.mrt_ms;
    if (name == "throughput_per_ms") return m.throughput_per_ms;
    if (name == "util_endorsement") return m.util_endorsement;
    if (name == "util_ordering") return m.util_ordering;
    if (name == "util_commit") return m.util_commit;
    if (name == "discard_probability") return m.discard_probability;
    if (name == "block_call_rate_per_ms") return m.block_call_rate_per_ms;
    if (name == "timeout_call_rate_per_ms") return m.timeout_call_rate_per_ms;
    if (name == "transactions_in_progress") return m.transactions_in_progress;
    throw UnknownIdError("unknown metric '" + name + "'", name);
}

}  // namespace spnperf
