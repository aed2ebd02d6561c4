#include "spnperf/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "spnperf/errors.hpp"

namespace spnperf {
namespace {

bool is_integer_param(const std::string& name) {
    return name == "block_size" || name == "eq" || name == "ep" || name == "oq" ||
           name == "op" || name == "cq" || name == "cp";
}

void ensure_discard_tracked(std::vector<TrackedPredicate>& predicates) {
    for (const TrackedPredicate& p : predicates)
        if (p.name == "discard") return;
    predicates.push_back(hlf_discard_predicate());
}

struct PointOutcome {
    HlfMetrics metrics;
    bool nonconverged = false;
    bool reducible = false;
};

PointOutcome evaluate_point(const HlfParams& params, Backend backend, const SimConfig& sim,
                            const SolveConfig& solver, std::uint64_t seed) {
    const PetriNet net = build_hlf_net(params);
    EvaluationResult r;
    if (backend == Backend::Simulation) {
        SimConfig c = sim;
        c.seed = seed;
        ensure_discard_tracked(c.predicates);
        r = simulate(net, c);
    } else {
        SolveConfig c = solver;
        ensure_discard_tracked(c.predicates);
        r = evaluate_exact(erlang_expand(net, c.erlang_k), c);
    }
    PointOutcome out;
    out.metrics = compute_hlf_metrics(r, params);
    out.nonconverged = r.nonconverged;
    out.reducible = r.reducible;
    return out;
}

// Runs fn(0..n-1) on a small pool; exceptions surface after all workers join.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    const std::size_t pool_size =
        std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), std::max<std::size_t>(n, 1));
    if (pool_size <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < pool_size; ++w) pool.emplace_back(body);
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

void validate_backend_config(Backend backend, const SimConfig& sim, const SolveConfig& solver) {
    if (backend == Backend::Simulation) {
        if (sim.batch_count < 2) throw ValidationError("batch_count must be at least 2");
        if (!(sim.batch_length_ms > 0.0)) throw ValidationError("batch_length_ms must be positive");
    } else {
        if (solver.max_states < 1) throw ValidationError("max_states must be positive");
        if (solver.erlang_k < 1) throw ValidationError("erlang_k must be at least 1");
        if (!(solver.tol > 0.0)) throw ValidationError("tol must be positive");
    }
}

bool known_metric(const std::string& name) {
    const auto& names = hlf_metric_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace

HlfParams apply_param(const HlfParams& base, const std::string& name, double value) {
    HlfParams p = base;
    if (name == "arrival_delay_ms") p.arrival_delay_ms = value;
    else if (name == "timeout_ms") p.timeout_ms = value;
    else if (name == "te1_ms") p.te1_ms = value;
    else if (name == "te2_ms") p.te2_ms = value;
    else if (name == "te3_ms") p.te3_ms = value;
    else if (name == "te4_ms") p.te4_ms = value;
    else if (name == "te5_ms") p.te5_ms = value;
    else if (name == "te6_ms") p.te6_ms = value;
    else if (name == "te7_ms") p.te7_ms = value;
    else if (name == "te8_ms") p.te8_ms = value;
    else if (is_integer_param(name)) {
        const int v = static_cast<int>(std::llround(value));
        if (name == "block_size") p.block_size = v;
        else if (name == "eq") p.eq = v;
        else if (name == "ep") p.ep = v;
        else if (name == "oq") p.oq = v;
        else if (name == "op") p.op = v;
        else if (name == "cq") p.cq = v;
        else p.cp = v;
    } else {
        throw UnknownIdError("unknown parameter '" + name + "'", name);
    }
    return p;
}

std::uint64_t seed_for_point(std::uint64_t master, std::uint64_t index) {
    // splitmix64 step over master + golden-ratio stride
    std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SPNPERF_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<int>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

void SweepSpec::validate() const {
    if (axes.empty()) throw ValidationError("sweep needs at least one axis");
    for (std::size_t a = 0; a < axes.size(); ++a) {
        if (axes[a].values.empty())
            throw ValidationError("axis '" + axes[a].param + "' has no values");
        for (std::size_t b = 0; b < a; ++b)
            if (axes[b].param == axes[a].param)
                throw ValidationError("axis '" + axes[a].param + "' appears twice");
        for (double v : axes[a].values) apply_param(base, axes[a].param, v).validate();
    }
    for (const std::string& m : metrics)
        if (!known_metric(m)) throw UnknownIdError("unknown metric '" + m + "'", m);
    base.validate();
    validate_backend_config(backend, sim, solver);
}

SweepResult run_sweep(const SweepSpec& s, int workers) {
    s.validate();

    std::vector<std::size_t> sizes;
    std::size_t total = 1;
    for (const SweepAxis& a : s.axes) {
        sizes.push_back(a.values.size());
        total *= a.values.size();
    }

    SweepResult result;
    for (const SweepAxis& a : s.axes) result.axis_names.push_back(a.param);
    result.rows.resize(total);

    parallel_for(total, resolve_workers(workers), [&](std::size_t i) {
        SweepRow& row = result.rows[i];
        std::size_t rem = i;
        row.point.resize(s.axes.size());
        HlfParams params = s.base;
        for (std::size_t a = s.axes.size(); a-- > 0;) {
            const std::size_t vi = rem % sizes[a];
            rem /= sizes[a];
            row.point[a] = s.axes[a].values[vi];
            params = apply_param(params, s.axes[a].param, row.point[a]);
        }
        row.params = params;
        try {
            const PointOutcome out = evaluate_point(params, s.backend, s.sim, s.solver,
                                                    seed_for_point(s.sim.seed, i));
            row.metrics = out.metrics;
            row.nonconverged = out.nonconverged;
            row.reducible = out.reducible;
        } catch (const SpnError& e) {
            row.failed = true;
            row.error = e.what();
        }
    });
    return result;
}

void DoeSpec::validate() const {
    if (factors.size() < 2 || factors.size() > 6)
        throw ValidationError("factorial design needs 2 to 6 factors");
    for (std::size_t a = 0; a < factors.size(); ++a) {
        const DoeFactor& f = factors[a];
        for (std::size_t b = 0; b < a; ++b)
            if (factors[b].param == f.param)
                throw ValidationError("factor '" + f.param + "' appears twice");
        if (f.low == f.high)
            throw ValidationError("factor '" + f.param + "' has equal low and high levels");
        apply_param(base, f.param, f.low).validate();
        apply_param(base, f.param, f.high).validate();
    }
    if (!known_metric(response)) throw UnknownIdError("unknown metric '" + response + "'", response);
    if (replications < 1) throw ValidationError("replications must be at least 1");
    base.validate();
    validate_backend_config(backend, sim, solver);
}

EffectsTable compute_effects(const std::vector<std::string>& factor_names,
                             const std::vector<double>& responses) {
    const std::size_t k = factor_names.size();
    const std::size_t n = std::size_t{1} << k;
    if (responses.size() != n)
        throw ValidationError("expected " + std::to_string(n) + " responses, got " +
                              std::to_string(responses.size()));

    EffectsTable table;
    table.cell_responses = responses;
    for (double y : responses) table.q0 += y;
    table.q0 /= static_cast<double>(n);

    double total_ss = 0.0;
    for (std::size_t mask = 1; mask < n; ++mask) {
        Effect e;
        for (std::size_t j = 0; j < k; ++j) {
            if (!(mask & (std::size_t{1} << j))) continue;
            e.factors.push_back(static_cast<int>(j));
            if (!e.name.empty()) e.name += "*";
            e.name += factor_names[j];
        }
        for (std::size_t i = 0; i < n; ++i) {
            // sign = product over involved factors of +-1 by level bit
            const int bits = static_cast<int>(std::popcount(i & mask));
            const int parity = static_cast<int>(std::popcount(mask)) - bits;
            e.value += (parity % 2 == 0 ? 1.0 : -1.0) * responses[i];
        }
        e.value /= static_cast<double>(n);
        total_ss += static_cast<double>(n) * e.value * e.value;
        table.effects.push_back(std::move(e));
    }
    if (total_ss > 0.0)
        for (Effect& e : table.effects)
            e.percent = 100.0 * static_cast<double>(n) * e.value * e.value / total_ss;
    std::stable_sort(table.effects.begin(), table.effects.end(),
                     [](const Effect& a, const Effect& b) { return a.percent > b.percent; });
    return table;
}

EffectsTable doe_2k(const DoeSpec& d, int workers) {
    d.validate();
    const std::size_t k = d.factors.size();
    const std::size_t cells = std::size_t{1} << k;
    const std::size_t reps =
        d.backend == Backend::Simulation ? static_cast<std::size_t>(d.replications) : 1;

    // one job per (cell, replication); each job owns its own slot
    std::vector<double> job_responses(cells * reps, 0.0);
    parallel_for(cells * reps, resolve_workers(workers), [&](std::size_t job) {
        const std::size_t cell = job / reps;
        HlfParams params = d.base;
        for (std::size_t j = 0; j < k; ++j) {
            const bool high = (cell >> j) & 1;
            params = apply_param(params, d.factors[j].param,
                                 high ? d.factors[j].high : d.factors[j].low);
        }
        const PointOutcome out =
            evaluate_point(params, d.backend, d.sim, d.solver, seed_for_point(d.sim.seed, job));
        job_responses[job] = hlf_metric_value(out.metrics, d.response);
    });
    std::vector<double> responses(cells, 0.0);
    for (std::size_t job = 0; job < job_responses.size(); ++job)
        responses[job / reps] += job_responses[job] / static_cast<double>(reps);

    std::vector<std::string> names;
    for (const DoeFactor& f : d.factors) names.push_back(f.param);
    return compute_effects(names, responses);
}

InteractionProfile interaction_profile(const HlfParams& base, const std::vector<double>& timeouts,
                                       Backend backend, const SimConfig& sim,
                                       const SolveConfig& solver, int workers) {
    if (timeouts.empty()) throw ValidationError("interaction profile needs at least one timeout");
    validate_backend_config(backend, sim, solver);

    InteractionProfile profile;
    profile.rows.resize(timeouts.size());
    parallel_for(timeouts.size(), resolve_workers(workers), [&](std::size_t i) {
        const HlfParams params = apply_param(base, "timeout_ms", timeouts[i]);
        const PointOutcome out =
            evaluate_point(params, backend, sim, solver, seed_for_point(sim.seed, i));
        profile.rows[i] = {timeouts[i], out.metrics.block_call_rate_per_ms,
                           out.metrics.timeout_call_rate_per_ms};
    });
    for (std::size_t i = 0; i < profile.rows.size(); ++i) {
        if (profile.rows[i].block_call_rate >= profile.rows[i].timeout_call_rate) {
            profile.first_crossing = static_cast<int>(i);
            break;
        }
    }
    return profile;
}

namespace {

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                const char* what) {
    if (!j.is_object()) throw ValidationError(std::string(what) + " must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ValidationError(std::string("unknown key '") + key + "' in " + what);
    }
}

double as_double(const nlohmann::json& j, const char* key) {
    if (!j.at(key).is_number())
        throw ValidationError(std::string("'") + key + "' must be a number");
    return j.at(key).get<double>();
}

std::int64_t as_int(const nlohmann::json& j, const char* key) {
    if (!j.at(key).is_number_integer())
        throw ValidationError(std::string("'") + key + "' must be an integer");
    return j.at(key).get<std::int64_t>();
}

Backend backend_from_json(const nlohmann::json& j) {
    if (!j.is_string()) throw ValidationError("'backend' must be a string");
    const std::string s = j.get<std::string>();
    if (s == "simulation") return Backend::Simulation;
    if (s == "solver") return Backend::Solver;
    throw ValidationError("backend must be 'simulation' or 'solver', got '" + s + "'");
}

SimConfig sim_config_from_json(const nlohmann::json& j) {
    check_keys(j,
               {"seed", "warmup_time_ms", "batch_count", "batch_length_ms", "max_time_ms",
                "confidence_level", "max_tracked_tokens"},
               "sim config");
    SimConfig c;
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer() || as_int(j, "seed") < 0)
            throw ValidationError("'seed' must be a non-negative integer");
        c.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("warmup_time_ms")) c.warmup_time_ms = as_double(j, "warmup_time_ms");
    if (j.contains("batch_count")) c.batch_count = static_cast<int>(as_int(j, "batch_count"));
    if (j.contains("batch_length_ms")) c.batch_length_ms = as_double(j, "batch_length_ms");
    if (j.contains("max_time_ms")) c.max_time_ms = as_double(j, "max_time_ms");
    if (j.contains("confidence_level")) c.confidence_level = as_double(j, "confidence_level");
    if (j.contains("max_tracked_tokens"))
        c.max_tracked_tokens = static_cast<int>(as_int(j, "max_tracked_tokens"));
    return c;
}

SolveConfig solve_config_from_json(const nlohmann::json& j) {
    check_keys(j, {"max_states", "tol", "max_iter", "erlang_k", "max_tracked_tokens"},
               "solver config");
    SolveConfig c;
    if (j.contains("max_states")) c.max_states = as_int(j, "max_states");
    if (j.contains("tol")) c.tol = as_double(j, "tol");
    if (j.contains("max_iter")) c.max_iter = as_int(j, "max_iter");
    if (j.contains("erlang_k")) c.erlang_k = static_cast<int>(as_int(j, "erlang_k"));
    if (j.contains("max_tracked_tokens"))
        c.max_tracked_tokens = static_cast<int>(as_int(j, "max_tracked_tokens"));
    return c;
}

void check_type_tag(const nlohmann::json& j, const char* expected) {
    if (!j.contains("type")) return;
    if (!j.at("type").is_string() || j.at("type").get<std::string>() != expected)
        throw ValidationError(std::string("spec 'type' must be '") + expected + "'");
}

}  // namespace

SweepSpec sweep_spec_from_json(const nlohmann::json& j) {
    check_keys(j, {"type", "name", "base", "axes", "backend", "sim", "solver", "metrics"},
               "sweep spec");
    check_type_tag(j, "sweep");
    SweepSpec s;
    if (j.contains("name")) {
        if (!j.at("name").is_string()) throw ValidationError("'name' must be a string");
        s.name = j.at("name").get<std::string>();
    }
    if (j.contains("base")) s.base = hlf_params_from_json(j.at("base"));
    if (!j.contains("axes") || !j.at("axes").is_array() || j.at("axes").empty())
        throw ValidationError("sweep spec needs a non-empty 'axes' array");
    for (const auto& aj : j.at("axes")) {
        check_keys(aj, {"param", "values"}, "sweep axis");
        if (!aj.contains("param") || !aj.at("param").is_string())
            throw ValidationError("sweep axis needs a string 'param'");
        if (!aj.contains("values") || !aj.at("values").is_array() || aj.at("values").empty())
            throw ValidationError("sweep axis needs a non-empty 'values' array");
        SweepAxis axis;
        axis.param = aj.at("param").get<std::string>();
        for (const auto& v : aj.at("values")) {
            if (!v.is_number()) throw ValidationError("axis values must be numbers");
            axis.values.push_back(v.get<double>());
        }
        s.axes.push_back(std::move(axis));
    }
    if (j.contains("backend")) s.backend = backend_from_json(j.at("backend"));
    if (j.contains("sim")) s.sim = sim_config_from_json(j.at("sim"));
    if (j.contains("solver")) s.solver = solve_config_from_json(j.at("solver"));
    if (j.contains("metrics")) {
        if (!j.at("metrics").is_array()) throw ValidationError("'metrics' must be an array");
        for (const auto& m : j.at("metrics")) {
            if (!m.is_string()) throw ValidationError("metric names must be strings");
            s.metrics.push_back(m.get<std::string>());
        }
    }
    s.validate();
    return s;
}

DoeSpec doe_spec_from_json(const nlohmann::json& j) {
    check_keys(j,
               {"type", "name", "base", "factors", "response", "replications", "backend", "sim",
                "solver"},
               "doe spec");
    check_type_tag(j, "doe");
    DoeSpec d;
    if (j.contains("name")) {
        if (!j.at("name").is_string()) throw ValidationError("'name' must be a string");
        d.name = j.at("name").get<std::string>();
    }
    if (j.contains("base")) d.base = hlf_params_from_json(j.at("base"));
    if (!j.contains("factors") || !j.at("factors").is_array())
        throw ValidationError("doe spec needs a 'factors' array");
    for (const auto& fj : j.at("factors")) {
        check_keys(fj, {"param", "low", "high"}, "doe factor");
        if (!fj.contains("param") || !fj.at("param").is_string())
            throw ValidationError("doe factor needs a string 'param'");
        if (!fj.contains("low") || !fj.contains("high"))
            throw ValidationError("doe factor needs 'low' and 'high'");
        DoeFactor f;
        f.param = fj.at("param").get<std::string>();
        f.low = as_double(fj, "low");
        f.high = as_double(fj, "high");
        d.factors.push_back(std::move(f));
    }
    if (j.contains("response")) {
        if (!j.at("response").is_string()) throw ValidationError("'response' must be a string");
        d.response = j.at("response").get<std::string>();
    }
    if (j.contains("replications")) d.replications = static_cast<int>(as_int(j, "replications"));
    if (j.contains("backend")) d.backend = backend_from_json(j.at("backend"));
    if (j.contains("sim")) d.sim = sim_config_from_json(j.at("sim"));
    if (j.contains("solver")) d.solver = solve_config_from_json(j.at("solver"));
    d.validate();
    return d;
}

}  // namespace spnperf
