#include "spnperf/cli.hpp"

#include <cctype>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spnperf/csv.hpp"
#include "spnperf/errors.hpp"
#include "spnperf/experiments.hpp"
#include "spnperf/hlf.hpp"
#include "spnperf/net_json.hpp"
#include "spnperf/result.hpp"
#include "spnperf/simulate.hpp"
#include "spnperf/solver.hpp"

namespace spnperf {
namespace {

constexpr const char* kToolVersion = "spnperf 1.0.0";

using nlohmann::json;
namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open input file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json parse_json_text(const std::string& text, const std::string& path) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError("input file '" + path + "' is not valid JSON: " + std::string(e.what()));
    }
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex16(std::uint64_t v) {
    static const char digits[] = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return s;
}

std::string sanitize_stem(const std::string& path) {
    std::string stem = fs::path(path).stem().string();
    if (stem.empty()) stem = "input";
    for (char& c : stem) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    }
    return stem;
}

std::string backend_name(Backend b) { return b == Backend::Solver ? "solver" : "simulation"; }

// Options shared by evaluate/sweep/doe. The Option pointers let override logic
// distinguish "explicitly passed" from "default".
struct CliOptions {
    std::string input;
    std::string backend = "sim";
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    std::int64_t max_states = 2'000'000;
    int erlang_k = 20;
    double warmup_ms = 10'000.0;
    int batches = 30;
    double batch_ms = 10'000.0;
    double confidence = 0.95;

    CLI::Option* backend_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* max_states_opt = nullptr;
    CLI::Option* erlang_k_opt = nullptr;
    CLI::Option* warmup_opt = nullptr;
    CLI::Option* batches_opt = nullptr;
    CLI::Option* batch_ms_opt = nullptr;
    CLI::Option* confidence_opt = nullptr;
};

void add_common_flags(CLI::App* cmd, CliOptions& o) {
    cmd->add_option("input", o.input, "input JSON file")->required();
    o.backend_opt = cmd->add_option("--backend", o.backend, "analysis backend")
                        ->check(CLI::IsMember({"sim", "solver"}));
    o.seed_opt = cmd->add_option("--seed", o.seed, "master RNG seed");
    cmd->add_option("--out", o.out_dir, "output directory (created if missing)");
    o.max_states_opt = cmd->add_option("--max-states", o.max_states, "solver state-space cap");
    o.erlang_k_opt =
        cmd->add_option("--erlang-k", o.erlang_k, "Erlang phases per deterministic transition (solver)");
    o.warmup_opt = cmd->add_option("--warmup-ms", o.warmup_ms, "simulation warmup span");
    o.batches_opt = cmd->add_option("--batches", o.batches, "simulation batch count");
    o.batch_ms_opt = cmd->add_option("--batch-ms", o.batch_ms, "simulation batch length");
    o.confidence_opt = cmd->add_option("--confidence", o.confidence, "confidence level for half-widths");
}

bool passed(const CLI::Option* opt) { return opt != nullptr && opt->count() > 0; }

// Overrides a spec file's run configuration with explicitly passed flags.
void apply_overrides(const CliOptions& o, Backend& backend, SimConfig& sim, SolveConfig& solver) {
    if (passed(o.backend_opt)) backend = o.backend == "solver" ? Backend::Solver : Backend::Simulation;
    if (passed(o.seed_opt)) sim.seed = o.seed;
    if (passed(o.max_states_opt)) solver.max_states = o.max_states;
    if (passed(o.erlang_k_opt)) solver.erlang_k = o.erlang_k;
    if (passed(o.warmup_opt)) sim.warmup_time_ms = o.warmup_ms;
    if (passed(o.batches_opt)) sim.batch_count = o.batches;
    if (passed(o.batch_ms_opt)) sim.batch_length_ms = o.batch_ms;
    if (passed(o.confidence_opt)) sim.confidence_level = o.confidence;
}

// Flags that change results are folded into the output-name digest so a rerun
// with different settings can never silently overwrite existing files.
std::string override_tag(const std::string& command, const CliOptions& o) {
    std::string t = command;
    auto add = [&](const CLI::Option* opt, const char* key, const std::string& value) {
        if (passed(opt)) t.append("|").append(key).append("=").append(value);
    };
    add(o.backend_opt, "backend", o.backend);
    add(o.seed_opt, "seed", std::to_string(o.seed));
    add(o.max_states_opt, "max_states", std::to_string(o.max_states));
    add(o.erlang_k_opt, "erlang_k", std::to_string(o.erlang_k));
    add(o.warmup_opt, "warmup_ms", format_double(o.warmup_ms));
    add(o.batches_opt, "batches", std::to_string(o.batches));
    add(o.batch_ms_opt, "batch_ms", format_double(o.batch_ms));
    add(o.confidence_opt, "confidence", format_double(o.confidence));
    return t;
}

// evaluate has no spec file carrying run settings, so every effective setting
// participates in the digest, defaults included.
std::string evaluate_tag(const CliOptions& o) {
    return "evaluate|backend=" + o.backend + "|seed=" + std::to_string(o.seed) +
           "|max_states=" + std::to_string(o.max_states) + "|erlang_k=" + std::to_string(o.erlang_k) +
           "|warmup_ms=" + format_double(o.warmup_ms) + "|batches=" + std::to_string(o.batches) +
           "|batch_ms=" + format_double(o.batch_ms) + "|confidence=" + format_double(o.confidence);
}

struct RunContext {
    std::string command;
    std::string input_path;
    std::string input_digest;
    std::string run_digest;
    std::string base_name;  // "<command>_<stem>_<digest>"
    fs::path out_dir;
    std::uint64_t seed = 0;
    Backend backend = Backend::Simulation;
    std::vector<std::string> warnings;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
};

RunContext make_context(const std::string& command, const std::string& input_path,
                        const std::string& bytes, const std::string& tag, const std::string& out_dir) {
    RunContext ctx;
    ctx.command = command;
    ctx.input_path = input_path;
    ctx.input_digest = hex16(fnv1a64(bytes));
    ctx.run_digest = hex16(fnv1a64(tag, fnv1a64(bytes)));
    ctx.base_name = command + "_" + sanitize_stem(input_path) + "_" + ctx.run_digest;
    ctx.out_dir = fs::path(out_dir);
    fs::create_directories(ctx.out_dir);
    return ctx;
}

// Result files are rewritten in place (same digest implies same content), but a
// content mismatch is reported instead of passing silently.
void write_output(RunContext& ctx, const std::string& name, const std::string& content,
                  std::ostream& out, std::ostream& err) {
    const fs::path path = ctx.out_dir / name;
    if (fs::exists(path)) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream old;
        old << in.rdbuf();
        if (old.str() != content) {
            err << "warning: replacing " << path.string() << " (existing content differs)\n";
        }
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("cannot write output file '" + path.string() + "'");
    f << content;
    f.flush();
    if (!f) throw ValidationError("failed while writing output file '" + path.string() + "'");
    ctx.outputs.push_back(name);
    out << "wrote " << path.string() << "\n";
}

// The manifest is written last so it can list every output and the full
// warning set. Wall-clock runtime lives only here, keeping CSV/result files
// byte-identical across reruns.
void write_manifest(RunContext& ctx, std::ostream& out) {
    const double runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - ctx.t0).count();
    json m;
    m["tool"] = kToolVersion;
    m["command"] = ctx.command;
    m["input"] = ctx.input_path;
    m["input_digest"] = "fnv1a64:" + ctx.input_digest;
    m["run_digest"] = ctx.run_digest;
    m["master_seed"] = ctx.seed;
    m["backend"] = backend_name(ctx.backend);
    m["runtime_ms"] = runtime_ms;
    m["warnings"] = ctx.warnings;
    m["outputs"] = ctx.outputs;
    const fs::path path = ctx.out_dir / (ctx.base_name + ".manifest.json");
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("cannot write output file '" + path.string() + "'");
    f << m.dump(2) << "\n";
    out << "wrote " << path.string() << "\n";
}

void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& r : rows) {
        if (r.size() > width.size()) width.resize(r.size(), 0);
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    for (const auto& r : rows) {
        out << " ";
        for (std::size_t i = 0; i < r.size(); ++i) {
            out << " " << r[i];
            if (i + 1 < r.size()) out << std::string(width[i] - r[i].size(), ' ');
        }
        out << "\n";
    }
}

void collect_result_warnings(const EvaluationResult& r, RunContext& ctx) {
    if (r.nonconverged) {
        ctx.warnings.push_back(
            "confidence intervals did not converge; increase --batches or --batch-ms");
    }
    if (r.histogram_truncated) {
        ctx.warnings.push_back("token histogram truncated at the tracking cap");
    }
    if (r.reducible) {
        ctx.warnings.push_back(
            "chain is reducible: transient states dropped, steady state taken on the recurrent class");
    }
}

// ---------------------------------------------------------------------------
// validate

int do_validate(const std::string& input, std::ostream&, std::ostream& err) {
    const std::string bytes = read_file(input);
    const json j = parse_json_text(bytes, input);
    if (j.is_object() && j.contains("type")) {
        const std::string type = j["type"].is_string() ? j["type"].get<std::string>() : "";
        if (type == "sweep") {
            SweepSpec s = sweep_spec_from_json(j);
            std::size_t points = 1;
            for (const auto& a : s.axes) points *= a.values.size();
            err << input << ": valid sweep spec '" << s.name << "' (" << s.axes.size()
                << " axes, " << points << " points, backend " << backend_name(s.backend) << ")\n";
            return 0;
        }
        if (type == "doe") {
            DoeSpec d = doe_spec_from_json(j);
            err << input << ": valid doe spec '" << d.name << "' (" << d.factors.size()
                << " factors, " << (std::size_t{1} << d.factors.size()) << " cells, response "
                << d.response << ")\n";
            return 0;
        }
        throw ValidationError("unknown spec type '" + type + "' (expected \"sweep\" or \"doe\")");
    }
    if (j.is_object() && (j.contains("places") || j.contains("transitions"))) {
        PetriNet net = net_from_json(j);
        err << input << ": valid net '" << net.name() << "' (" << net.places().size()
            << " places, " << net.transitions().size() << " transitions, " << net.arc_specs().size()
            << " arcs)\n";
        return 0;
    }
    if (is_hlf_params_json(j)) {
        HlfParams p = hlf_params_from_json(j);
        PetriNet net = build_hlf_net(p);
        err << input << ": valid pipeline parameters (expand to " << net.places().size()
            << " places, " << net.transitions().size() << " transitions)\n";
        return 0;
    }
    throw ValidationError("input '" + input +
                          "' is neither a net, pipeline parameters, nor a sweep/doe spec");
}

// ---------------------------------------------------------------------------
// evaluate

int do_evaluate(const CliOptions& o, std::ostream& out, std::ostream& err) {
    const std::string bytes = read_file(o.input);
    const json j = parse_json_text(bytes, o.input);

    if (j.is_object() && j.contains("type")) {
        const std::string type = j["type"].is_string() ? j["type"].get<std::string>() : "?";
        throw ValidationError("input '" + o.input + "' is a " + type +
                              " spec; run the matching subcommand instead of evaluate");
    }

    const bool is_params = !(j.is_object() && (j.contains("places") || j.contains("transitions")));
    std::optional<HlfParams> params;
    PetriNet net = [&]() -> PetriNet {
        if (is_params) {
            if (!is_hlf_params_json(j)) {
                throw ValidationError("input '" + o.input +
                                      "' is neither a net description nor pipeline parameters");
            }
            params = hlf_params_from_json(j);
            return build_hlf_net(*params);
        }
        return net_from_json(j);
    }();

    const Backend backend = o.backend == "solver" ? Backend::Solver : Backend::Simulation;
    RunContext ctx = make_context("evaluate", o.input, bytes, evaluate_tag(o), o.out_dir);
    ctx.seed = o.seed;
    ctx.backend = backend;

    std::vector<TrackedPredicate> predicates;
    if (params) predicates.push_back(hlf_discard_predicate());

    EvaluationResult r;
    if (backend == Backend::Simulation) {
        SimConfig sc;
        sc.seed = o.seed;
        sc.warmup_time_ms = o.warmup_ms;
        sc.batch_count = o.batches;
        sc.batch_length_ms = o.batch_ms;
        sc.confidence_level = o.confidence;
        sc.predicates = predicates;
        r = simulate(net, sc);
    } else {
        SolveConfig cfg;
        cfg.max_states = o.max_states;
        cfg.erlang_k = o.erlang_k;
        cfg.predicates = predicates;
        r = evaluate_exact(net.has_deterministic() ? erlang_expand(net, o.erlang_k) : net, cfg);
    }

    std::optional<HlfMetrics> metrics;
    if (params) metrics = compute_hlf_metrics(r, *params);

    const std::string manifest_name = ctx.base_name + ".manifest.json";

    // Key-value result file.
    std::ostringstream kv;
    kv << "tool = " << kToolVersion << "\n";
    kv << "command = evaluate\n";
    kv << "input = " << o.input << "\n";
    kv << "manifest = " << manifest_name << "\n";
    kv << "backend = " << backend_name(backend) << "\n";
    kv << "seed = " << o.seed << "\n";
    kv << "observed_time_ms = " << format_double(r.observed_time_ms) << "\n";
    kv << "nonconverged = " << (r.nonconverged ? 1 : 0) << "\n";
    kv << "histogram_truncated = " << (r.histogram_truncated ? 1 : 0) << "\n";
    kv << "reducible = " << (r.reducible ? 1 : 0) << "\n";
    if (metrics) {
        for (const std::string& name : hlf_metric_names()) {
            kv << "metric." << name << " = " << format_double(hlf_metric_value(*metrics, name))
               << "\n";
        }
    }
    for (std::size_t i = 0; i < r.place_ids.size(); ++i) {
        kv << "place." << r.place_ids[i] << ".mean = " << format_double(r.places[i].mean) << "\n";
        kv << "place." << r.place_ids[i]
           << ".half_width = " << format_double(r.places[i].half_width) << "\n";
    }
    for (std::size_t i = 0; i < r.transition_ids.size(); ++i) {
        kv << "transition." << r.transition_ids[i]
           << ".rate_per_ms = " << format_double(r.transitions[i].rate_per_ms) << "\n";
        kv << "transition." << r.transition_ids[i]
           << ".half_width = " << format_double(r.transitions[i].half_width) << "\n";
    }
    for (const PredicateStats& p : r.predicates) {
        kv << "predicate." << p.name << ".probability = " << format_double(p.probability) << "\n";
        kv << "predicate." << p.name << ".half_width = " << format_double(p.half_width) << "\n";
    }

    // CSV twin of the result file.
    std::string csv = csv_line({"kind", "id", "value", "half_width"});
    if (metrics) {
        for (const std::string& name : hlf_metric_names()) {
            csv += csv_line({"metric", name, format_double(hlf_metric_value(*metrics, name)), ""});
        }
    }
    for (std::size_t i = 0; i < r.place_ids.size(); ++i) {
        csv += csv_line({"place", r.place_ids[i], format_double(r.places[i].mean),
                         format_double(r.places[i].half_width)});
    }
    for (std::size_t i = 0; i < r.transition_ids.size(); ++i) {
        csv += csv_line({"transition", r.transition_ids[i],
                         format_double(r.transitions[i].rate_per_ms),
                         format_double(r.transitions[i].half_width)});
    }
    for (const PredicateStats& p : r.predicates) {
        csv += csv_line({"predicate", p.name, format_double(p.probability),
                         format_double(p.half_width)});
    }

    collect_result_warnings(r, ctx);
    for (const std::string& w : ctx.warnings) err << "warning: " << w << "\n";

    // Summary table.
    if (metrics) {
        out << "metrics (" << backend_name(backend) << "):\n";
        std::vector<std::vector<std::string>> rows;
        for (const std::string& name : hlf_metric_names()) {
            rows.push_back({name, format_double(hlf_metric_value(*metrics, name))});
        }
        print_table(out, rows);
    } else {
        out << "place means (" << backend_name(backend) << "):\n";
        std::vector<std::vector<std::string>> rows{{"place", "mean", "half_width"}};
        for (std::size_t i = 0; i < r.place_ids.size(); ++i) {
            rows.push_back({r.place_ids[i], format_double(r.places[i].mean),
                            format_double(r.places[i].half_width)});
        }
        print_table(out, rows);
        out << "firing rates per ms:\n";
        rows = {{"transition", "rate", "half_width"}};
        for (std::size_t i = 0; i < r.transition_ids.size(); ++i) {
            rows.push_back({r.transition_ids[i], format_double(r.transitions[i].rate_per_ms),
                            format_double(r.transitions[i].half_width)});
        }
        print_table(out, rows);
    }

    write_output(ctx, ctx.base_name + ".result", kv.str(), out, err);
    write_output(ctx, ctx.base_name + ".csv", csv, out, err);
    write_manifest(ctx, out);
    return r.nonconverged ? 4 : 0;
}

// ---------------------------------------------------------------------------
// sweep

int do_sweep(const CliOptions& o, std::ostream& out, std::ostream& err) {
    const std::string bytes = read_file(o.input);
    const json j = parse_json_text(bytes, o.input);
    SweepSpec s = sweep_spec_from_json(j);
    apply_overrides(o, s.backend, s.sim, s.solver);
    s.validate();

    RunContext ctx = make_context("sweep", o.input, bytes, override_tag("sweep", o), o.out_dir);
    ctx.seed = s.sim.seed;
    ctx.backend = s.backend;

    const SweepResult res = run_sweep(s, 0);

    const std::vector<std::string>& metric_names =
        s.metrics.empty() ? hlf_metric_names() : s.metrics;
    bool has_arrival_axis = false;
    for (const std::string& a : res.axis_names) {
        if (a == "arrival_delay_ms") has_arrival_axis = true;
    }

    std::vector<std::string> header = res.axis_names;
    if (has_arrival_axis) header.push_back("arrival_rate_per_ms");
    header.insert(header.end(), metric_names.begin(), metric_names.end());
    header.push_back("nonconverged");
    header.push_back("reducible");
    header.push_back("error");

    std::string csv = csv_line(header);
    std::size_t failed = 0, nonconverged = 0, reducible = 0;
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const SweepRow& row = res.rows[i];
        std::vector<std::string> fields;
        for (double v : row.point) fields.push_back(format_double(v));
        if (has_arrival_axis) fields.push_back(format_double(1.0 / row.params.arrival_delay_ms));
        for (const std::string& m : metric_names) {
            fields.push_back(row.failed ? std::string()
                                        : format_double(hlf_metric_value(row.metrics, m)));
        }
        fields.push_back(row.nonconverged ? "1" : "0");
        fields.push_back(row.reducible ? "1" : "0");
        fields.push_back(row.error);
        csv += csv_line(fields);
        if (row.failed) {
            ++failed;
            std::string where;
            for (std::size_t a = 0; a < res.axis_names.size(); ++a) {
                if (a) where += ", ";
                where += res.axis_names[a] + "=" + format_double(row.point[a]);
            }
            ctx.warnings.push_back("point " + std::to_string(i) + " (" + where +
                                   ") failed: " + row.error);
        }
        nonconverged += row.nonconverged;
        reducible += row.reducible;
    }
    if (nonconverged > 0) {
        ctx.warnings.push_back(std::to_string(nonconverged) + " of " +
                               std::to_string(res.rows.size()) + " points nonconverged");
    }
    if (reducible > 0) {
        ctx.warnings.push_back(std::to_string(reducible) + " of " +
                               std::to_string(res.rows.size()) + " points on a reducible chain");
    }
    for (const std::string& w : ctx.warnings) err << "warning: " << w << "\n";

    out << "sweep '" << s.name << "': " << res.rows.size() << " points ("
        << backend_name(s.backend) << ", seed " << s.sim.seed << "), " << failed << " failed, "
        << nonconverged << " nonconverged\n";
    write_output(ctx, ctx.base_name + ".csv", csv, out, err);
    write_manifest(ctx, out);
    return 0;
}

// ---------------------------------------------------------------------------
// doe

int do_doe(const CliOptions& o, std::ostream& out, std::ostream& err) {
    const std::string bytes = read_file(o.input);
    const json j = parse_json_text(bytes, o.input);
    DoeSpec d = doe_spec_from_json(j);
    apply_overrides(o, d.backend, d.sim, d.solver);
    d.validate();

    RunContext ctx = make_context("doe", o.input, bytes, override_tag("doe", o), o.out_dir);
    ctx.seed = d.sim.seed;
    ctx.backend = d.backend;

    const EffectsTable table = doe_2k(d, 0);

    // Cell responses, one row per design cell in standard order.
    std::vector<std::string> header;
    for (const DoeFactor& f : d.factors) header.push_back(f.param);
    header.push_back(d.response);
    std::string cells_csv = csv_line(header);
    for (std::size_t cell = 0; cell < table.cell_responses.size(); ++cell) {
        std::vector<std::string> fields;
        for (std::size_t f = 0; f < d.factors.size(); ++f) {
            const bool high = (cell >> f) & 1u;
            fields.push_back(format_double(high ? d.factors[f].high : d.factors[f].low));
        }
        fields.push_back(format_double(table.cell_responses[cell]));
        cells_csv += csv_line(fields);
    }

    std::string effects_csv = csv_line({"term", "effect", "percent_of_variation"});
    effects_csv += csv_line({"mean", format_double(table.q0), ""});
    for (const Effect& e : table.effects) {
        effects_csv += csv_line({e.name, format_double(e.value), format_double(e.percent)});
    }

    out << "doe '" << d.name << "': response " << d.response << ", "
        << table.cell_responses.size() << " cells (" << backend_name(d.backend) << ", seed "
        << d.sim.seed << "), grand mean = " << format_double(table.q0) << "\n";
    std::vector<std::vector<std::string>> rows{{"term", "effect", "percent"}};
    for (const Effect& e : table.effects) {
        std::ostringstream pct;
        pct.setf(std::ios::fixed);
        pct.precision(2);
        pct << e.percent << "%";
        rows.push_back({e.name, format_double(e.value), pct.str()});
    }
    print_table(out, rows);

    write_output(ctx, ctx.base_name + "_cells.csv", cells_csv, out, err);
    write_output(ctx, ctx.base_name + "_effects.csv", effects_csv, out, err);
    write_manifest(ctx, out);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"stochastic Petri net performance toolkit", "spnperf"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    std::string validate_input;
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "check an input file and print diagnostics to stderr");
    validate_cmd->add_option("input", validate_input,
                             "net JSON, pipeline parameters, or sweep/doe spec")
        ->required();

    CliOptions eo, so, doo;
    CLI::App* evaluate_cmd =
        app.add_subcommand("evaluate", "evaluate one model and write result + CSV files");
    add_common_flags(evaluate_cmd, eo);
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a parameter-sweep spec over a grid");
    add_common_flags(sweep_cmd, so);
    CLI::App* doe_cmd = app.add_subcommand("doe", "run a 2^k factorial design and rank effects");
    add_common_flags(doe_cmd, doo);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (validate_cmd->parsed()) return do_validate(validate_input, out, err);
        if (evaluate_cmd->parsed()) return do_evaluate(eo, out, err);
        if (sweep_cmd->parsed()) return do_sweep(so, out, err);
        if (doe_cmd->parsed()) return do_doe(doo, out, err);
        err << "error: no command given\n";
        return 1;
    } catch (const StateSpaceExceededError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const NonconvergenceError& e) {
        err << "error: " << e.what() << "\n";
        return 4;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const VanishingLoopError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const SpnError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace spnperf
