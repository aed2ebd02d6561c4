#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "spnperf/cli.hpp"
#include "spnperf/csv.hpp"
#include "spnperf/errors.hpp"
#include "spnperf/net.hpp"
#include "spnperf/net_json.hpp"

using namespace spnperf;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("spnperf_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name, const std::string& content) const {
        const fs::path p = path / name;
        std::ofstream f(p, std::ios::binary);
        f << content;
        return p.string();
    }
};

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun run(const std::vector<std::string>& args) {
    std::ostringstream o, e;
    CliRun r;
    r.code = run_cli(args, o, e);
    r.out = o.str();
    r.err = e.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<fs::path> files_with_suffix(const fs::path& dir, const std::string& suffix) {
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.size() >= suffix.size() &&
            name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
            out.push_back(entry.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

// Grid-world net used by several CLI tests: bounded single queue.
PetriNet bounded_queue_net(int capacity) {
    NetBuilder b;
    b.place("Q").place("F", capacity);
    b.exponential("arrive", 2.0).arc("F", "arrive").arc("arrive", "Q");
    b.exponential("serve", 2.0).arc("Q", "serve").arc("serve", "F");
    return b.build("bounded-queue");
}

std::string tiny_params_json() {
    json j;
    j["arrival_delay_ms"] = 4.0;
    j["block_size"] = 1;
    j["timeout_ms"] = 1000.0;
    j["eq"] = 1;
    j["ep"] = 1;
    j["oq"] = 1;
    j["op"] = 1;
    j["cq"] = 1;
    j["cp"] = 1;
    j["te1_ms"] = 4.0;
    j["te2_ms"] = 4.0;
    j["te3_ms"] = 3.0;
    j["te4_ms"] = 2.0;
    j["te5_ms"] = 2.0;
    j["te6_ms"] = 5.0;
    j["te7_ms"] = 8.0;
    j["te8_ms"] = 8.0;
    return j.dump(2);
}

}  // namespace

TEST_SUITE_BEGIN("json_cli");

TEST_CASE("format_double produces shortest round-trip forms") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(3.0) == "3");
    CHECK(format_double(-2.25) == "-2.25");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    // strtod instead of std::stod: the latter throws out_of_range on the
    // subnormal (ERANGE underflow), which is still a perfect round trip
    for (double v : {0.1, 1.0 / 3.0, 6.0 / 80.0, 1e300, 5e-324, 19.0 / 21.0}) {
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
        CHECK(std::strtod(format_double(-v).c_str(), nullptr) == -v);
    }
}

TEST_CASE("csv quoting follows RFC 4180") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("with,comma") == "\"with,comma\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_field("line\nbreak") == "\"line\nbreak\"");
    CHECK(csv_field("") == "");
    CHECK(csv_line({"a", "b,c", "d"}) == "a,\"b,c\",d\n");
    CHECK(csv_line({}) == "\n");
}

TEST_CASE("net json round trip preserves structure") {
    NetBuilder b;
    b.place("A", 2).place("B").place("C", 1);
    b.immediate("i1", 3.0, 2, "#A>0").arc("A", "i1").arc("i1", "B");
    b.exponential("e1", 5.0, "", ServerSemantics::Infinite).arc("B", "e1").arc("e1", "C");
    b.deterministic("d1", 7.5).arc("C", "d1", 2).arc("d1", "A").inhibitor("B", "d1", 4);
    PetriNet original = b.build("round-trip");

    const json j = net_to_json(original);
    PetriNet copy = net_from_json(j);

    CHECK(copy.name() == "round-trip");
    REQUIRE(copy.places().size() == original.places().size());
    for (std::size_t i = 0; i < original.places().size(); ++i) {
        CHECK(copy.places()[i].id == original.places()[i].id);
        CHECK(copy.places()[i].initial_tokens == original.places()[i].initial_tokens);
    }
    REQUIRE(copy.transitions().size() == original.transitions().size());
    for (std::size_t i = 0; i < original.transitions().size(); ++i) {
        const auto& a = original.transitions()[i];
        const auto& c = copy.transitions()[i];
        CHECK(c.id == a.id);
        CHECK(c.kind == a.kind);
        CHECK(c.priority == a.priority);
        CHECK(c.weight == a.weight);
        CHECK(c.delay_ms == a.delay_ms);
        CHECK((c.servers == a.servers));
        CHECK(c.guard_text == a.guard_text);
    }
    CHECK(copy.arc_specs().size() == original.arc_specs().size());

    // And the JSON itself is stable under a second round trip.
    CHECK(net_to_json(copy) == j);
}

TEST_CASE("net json rejects malformed documents") {
    json ok = net_to_json(bounded_queue_net(3));

    json bad = ok;
    bad["arcs"].push_back({{"from", "NOPE"}, {"to", "serve"}});
    CHECK_THROWS_AS(net_from_json(bad), ValidationError);
    try {
        net_from_json(bad);
    } catch (const SpnError& e) {
        CHECK(std::string(e.what()).find("NOPE") != std::string::npos);
    }

    bad = ok;
    bad["transitions"][0]["kind"] = "warp";
    CHECK_THROWS_AS(net_from_json(bad), ValidationError);

    bad = ok;
    bad["places"][0].erase("id");
    CHECK_THROWS_AS(net_from_json(bad), ValidationError);

    bad = ok;
    bad["places"].push_back({{"id", "Q"}});  // duplicate id
    CHECK_THROWS_AS(net_from_json(bad), ValidationError);

    CHECK_THROWS_AS(net_from_json(json::array()), ValidationError);
}

TEST_CASE("cli usage, help and version") {
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);

    CliRun help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("spnperf") != std::string::npos);
    CHECK(help.out.find("evaluate") != std::string::npos);

    CliRun version = run({"--version"});
    CHECK(version.code == 0);
    CHECK(version.out.find("1.0.0") != std::string::npos);

    // Unknown flag and bad enum value are usage errors, not crashes.
    CHECK(run({"evaluate", "x.json", "--frob"}).code == 1);
    CHECK(run({"evaluate", "x.json", "--backend", "quantum"}).code == 1);
}

TEST_CASE("validate accepts every bundled input kind") {
    TempDir tmp;
    const std::string net_file = tmp.file("queue.json", net_to_json(bounded_queue_net(3)).dump());
    CliRun r = run({"validate", net_file});
    CHECK(r.code == 0);
    CHECK(r.err.find("valid net") != std::string::npos);
    CHECK(r.err.find("2 places") != std::string::npos);

    const std::string params_file = tmp.file("params.json", tiny_params_json());
    r = run({"validate", params_file});
    CHECK(r.code == 0);
    CHECK(r.err.find("valid pipeline parameters") != std::string::npos);

    const std::string spec_dir = SPNPERF_SPEC_DIR;
    r = run({"validate", spec_dir + "/case01.spec"});
    CHECK(r.code == 0);
    CHECK(r.err.find("valid sweep spec") != std::string::npos);
    CHECK(r.err.find("60 points") != std::string::npos);

    r = run({"validate", spec_dir + "/case02.spec"});
    CHECK(r.code == 0);
    CHECK(r.err.find("50 points") != std::string::npos);

    r = run({"validate", spec_dir + "/case03.spec"});
    CHECK(r.code == 0);

    r = run({"validate", spec_dir + "/case04.spec"});
    CHECK(r.code == 0);
    CHECK(r.err.find("valid doe spec") != std::string::npos);
    CHECK(r.err.find("16 cells") != std::string::npos);

    r = run({"validate", spec_dir + "/hlf_default.json"});
    CHECK(r.code == 0);
    CHECK(r.err.find("valid pipeline parameters") != std::string::npos);
}

TEST_CASE("validate reports problems with exit code 2") {
    TempDir tmp;

    json bad_net = net_to_json(bounded_queue_net(2));
    bad_net["arcs"].push_back({{"from", "GHOST"}, {"to", "serve"}});
    const std::string bad_net_file = tmp.file("bad.json", bad_net.dump());
    CliRun r = run({"validate", bad_net_file});
    CHECK(r.code == 2);
    CHECK(r.err.find("GHOST") != std::string::npos);

    const std::string not_json = tmp.file("garbage.json", "{ nope");
    r = run({"validate", not_json});
    CHECK(r.code == 2);
    CHECK(r.err.find("not valid JSON") != std::string::npos);

    r = run({"validate", (tmp.path / "missing.json").string()});
    CHECK(r.code == 2);

    json bad_params = json::parse(tiny_params_json());
    bad_params["warp_factor"] = 9;
    r = run({"validate", tmp.file("badp.json", bad_params.dump())});
    CHECK(r.code == 2);
    CHECK(r.err.find("warp_factor") != std::string::npos);

    json bad_spec;
    bad_spec["type"] = "teleport";
    r = run({"validate", tmp.file("bads.json", bad_spec.dump())});
    CHECK(r.code == 2);
    CHECK(r.err.find("teleport") != std::string::npos);
}

TEST_CASE("evaluate with the solver writes exact results") {
    TempDir tmp;
    TempDir outdir;
    // M/M/1/3 with arrival mean 2, service mean 2: uniform pi, E(Q)=1.5.
    const std::string net_file = tmp.file("queue.json", net_to_json(bounded_queue_net(3)).dump());
    CliRun r = run({"evaluate", net_file, "--backend", "solver", "--out", outdir.path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("place means (solver):") != std::string::npos);

    auto results = files_with_suffix(outdir.path, ".result");
    auto csvs = files_with_suffix(outdir.path, ".csv");
    auto manifests = files_with_suffix(outdir.path, ".manifest.json");
    REQUIRE(results.size() == 1);
    REQUIRE(csvs.size() == 1);
    REQUIRE(manifests.size() == 1);

    const std::string name = results[0].filename().string();
    CHECK(name.rfind("evaluate_queue_", 0) == 0);
    CHECK(name.size() == std::string("evaluate_queue_").size() + 16 + std::string(".result").size());

    const std::string kv = slurp(results[0]);
    CHECK(kv.find("backend = solver\n") != std::string::npos);
    CHECK(kv.find("place.Q.mean = 1.5\n") != std::string::npos);
    CHECK(kv.find("nonconverged = 0\n") != std::string::npos);
    CHECK(kv.find("manifest = " + manifests[0].filename().string()) != std::string::npos);

    const std::string csv = slurp(csvs[0]);
    auto lines = split_lines(csv);
    REQUIRE(lines.size() >= 3);
    CHECK(lines[0] == "kind,id,value,half_width");
    CHECK(csv.find("place,Q,1.5,0\n") != std::string::npos);

    const json manifest = json::parse(slurp(manifests[0]));
    CHECK(manifest.at("command") == "evaluate");
    CHECK(manifest.at("backend") == "solver");
    CHECK(manifest.at("tool").get<std::string>().find("spnperf") != std::string::npos);
    CHECK(manifest.at("outputs").size() == 2);
    CHECK(manifest.at("runtime_ms").is_number());
    CHECK(manifest.at("input_digest").get<std::string>().rfind("fnv1a64:", 0) == 0);
}

TEST_CASE("evaluate on pipeline parameters emits the metric suite") {
    TempDir tmp;
    TempDir outdir;
    const std::string params_file = tmp.file("tiny.json", tiny_params_json());
    CliRun r = run({"evaluate", params_file, "--backend", "solver", "--erlang-k", "1", "--out",
                    outdir.path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("metrics (solver):") != std::string::npos);
    CHECK(r.out.find("mrt_ms") != std::string::npos);
    CHECK(r.out.find("discard_probability") != std::string::npos);

    auto results = files_with_suffix(outdir.path, ".result");
    REQUIRE(results.size() == 1);
    const std::string kv = slurp(results[0]);
    for (const char* metric :
         {"metric.mrt_ms = ", "metric.throughput_per_ms = ", "metric.util_endorsement = ",
          "metric.discard_probability = ", "metric.transactions_in_progress = "}) {
        CHECK(kv.find(metric) != std::string::npos);
    }
    CHECK(kv.find("predicate.discard.probability = ") != std::string::npos);

    auto csvs = files_with_suffix(outdir.path, ".csv");
    REQUIRE(csvs.size() == 1);
    auto lines = split_lines(slurp(csvs[0]));
    REQUIRE(lines.size() > 10);
    CHECK(lines[1].rfind("metric,mrt_ms,", 0) == 0);
}

TEST_CASE("evaluate maps failures to documented exit codes") {
    TempDir tmp;
    TempDir outdir;

    // Unbounded net: exploration must hit the cap -> exit 3.
    NetBuilder b;
    b.place("P");
    b.exponential("gen", 5.0).arc("gen", "P");
    const std::string open_net = tmp.file("open.json", net_to_json(b.build("open")).dump());
    CliRun r = run({"evaluate", open_net, "--backend", "solver", "--max-states", "10", "--out",
                    outdir.path.string()});
    CHECK(r.code == 3);
    CHECK(r.err.find("state space") != std::string::npos);

    // Handing a sweep spec to evaluate is a validation error -> exit 2.
    const std::string spec_dir = SPNPERF_SPEC_DIR;
    r = run({"evaluate", spec_dir + "/case01.spec", "--out", outdir.path.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("sweep") != std::string::npos);

    // Vanishing loop -> exit 2.
    NetBuilder loop;
    loop.place("A", 1);
    loop.immediate("spin").arc("A", "spin").arc("spin", "A");
    const std::string loop_net = tmp.file("loop.json", net_to_json(loop.build("loop")).dump());
    r = run({"evaluate", loop_net, "--backend", "solver", "--out", outdir.path.string()});
    CHECK(r.code == 2);
}

TEST_CASE("nonconverged simulation still writes outputs but exits 4") {
    TempDir tmp;
    TempDir outdir;
    // A deterministic source makes batch counts alternate 1,1,2,1 over four
    // 10 ms batches: every tracked quantity ends up with a wide interval.
    NetBuilder b;
    b.place("P");
    b.deterministic("tick", 7.0).arc("tick", "P");
    const std::string net_file = tmp.file("tick.json", net_to_json(b.build("tick")).dump());
    CliRun r = run({"evaluate", net_file, "--warmup-ms", "0", "--batches", "4", "--batch-ms",
                    "10", "--out", outdir.path.string()});
    CHECK(r.code == 4);
    CHECK(r.err.find("converge") != std::string::npos);

    auto results = files_with_suffix(outdir.path, ".result");
    REQUIRE(results.size() == 1);
    const std::string kv = slurp(results[0]);
    CHECK(kv.find("nonconverged = 1\n") != std::string::npos);
    CHECK(kv.find("backend = simulation\n") != std::string::npos);

    const json manifest = json::parse(slurp(files_with_suffix(outdir.path, ".manifest.json")[0]));
    REQUIRE(manifest.at("warnings").size() >= 1);
    CHECK(manifest.at("warnings")[0].get<std::string>().find("converge") != std::string::npos);
}

TEST_CASE("output names embed the run configuration digest") {
    TempDir tmp;
    TempDir outdir;
    const std::string net_file = tmp.file("queue.json", net_to_json(bounded_queue_net(3)).dump());
    const std::vector<std::string> base = {"evaluate", net_file, "--backend", "solver",
                                           "--out",    outdir.path.string()};
    CHECK(run(base).code == 0);
    auto first_csvs = files_with_suffix(outdir.path, ".csv");
    REQUIRE(first_csvs.size() == 1);
    const std::string first_bytes = slurp(first_csvs[0]);

    // Identical rerun: same names, byte-identical content, no warning.
    CliRun again = run(base);
    CHECK(again.code == 0);
    CHECK(again.err.find("replacing") == std::string::npos);
    auto csvs = files_with_suffix(outdir.path, ".csv");
    REQUIRE(csvs.size() == 1);
    CHECK(slurp(csvs[0]) == first_bytes);

    // A different seed is a different run digest: new files, old ones intact.
    std::vector<std::string> with_seed = base;
    with_seed.push_back("--seed");
    with_seed.push_back("99");
    CHECK(run(with_seed).code == 0);
    csvs = files_with_suffix(outdir.path, ".csv");
    CHECK(csvs.size() == 2);
}

TEST_CASE("sweep command writes grid csv with stable columns") {
    TempDir tmp;
    TempDir out1, out2;
    json spec;
    spec["type"] = "sweep";
    spec["name"] = "mini";
    spec["base"] = json::parse(tiny_params_json());
    spec["axes"] = json::array({json{{"param", "arrival_delay_ms"}, {"values", {10, 20}}},
                                json{{"param", "cp"}, {"values", {1, 2}}}});
    spec["backend"] = "solver";
    spec["solver"] = json{{"erlang_k", 1}, {"max_states", 200000}};
    spec["metrics"] = json::array({"mrt_ms", "throughput_per_ms"});
    const std::string spec_file = tmp.file("mini.spec", spec.dump(2));

    CliRun r = run({"sweep", spec_file, "--out", out1.path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("4 points") != std::string::npos);
    CHECK(r.out.find("0 failed") != std::string::npos);

    auto csvs = files_with_suffix(out1.path, ".csv");
    REQUIRE(csvs.size() == 1);
    CHECK(csvs[0].filename().string().rfind("sweep_mini_", 0) == 0);
    auto lines = split_lines(slurp(csvs[0]));
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] ==
          "arrival_delay_ms,cp,arrival_rate_per_ms,mrt_ms,throughput_per_ms,nonconverged,"
          "reducible,error");
    // Cartesian order: last axis fastest; derived rate = 1/delay.
    CHECK(lines[1].rfind("10,1,0.1,", 0) == 0);
    CHECK(lines[2].rfind("10,2,0.1,", 0) == 0);
    CHECK(lines[3].rfind("20,1,0.05,", 0) == 0);
    CHECK(lines[4].rfind("20,2,0.05,", 0) == 0);

    const json manifest = json::parse(slurp(files_with_suffix(out1.path, ".manifest.json")[0]));
    CHECK(manifest.at("command") == "sweep");
    CHECK(manifest.at("backend") == "solver");
    CHECK(manifest.at("outputs").size() == 1);

    // Rerun into a second directory, with a different worker count: identical bytes.
    setenv("SPNPERF_WORKERS", "3", 1);
    CliRun r2 = run({"sweep", spec_file, "--out", out2.path.string()});
    unsetenv("SPNPERF_WORKERS");
    CHECK(r2.code == 0);
    CHECK(slurp(files_with_suffix(out2.path, ".csv")[0]) == slurp(csvs[0]));
}

TEST_CASE("sweep records per-point failures without failing the run") {
    TempDir tmp;
    TempDir outdir;
    json spec;
    spec["type"] = "sweep";
    spec["name"] = "capwall";
    spec["base"] = json::parse(tiny_params_json());
    spec["axes"] = json::array({json{{"param", "eq"}, {"values", {1, 40}}}});
    spec["backend"] = "solver";
    spec["solver"] = json{{"erlang_k", 1}, {"max_states", 5000}};
    const std::string spec_file = tmp.file("capwall.spec", spec.dump());

    CliRun r = run({"sweep", spec_file, "--out", outdir.path.string()});
    CHECK(r.code == 0);
    CHECK(r.err.find("state space") != std::string::npos);
    auto lines = split_lines(slurp(files_with_suffix(outdir.path, ".csv")[0]));
    REQUIRE(lines.size() == 3);
    CHECK(lines[1].rfind("1,", 0) == 0);
    CHECK(lines[1].find("state space") == std::string::npos);
    CHECK(lines[2].rfind("40,", 0) == 0);
    CHECK(lines[2].find("state space") != std::string::npos);
    // Failed point leaves metric cells empty: ",," appears before the flags.
    CHECK(lines[2].find(",,") != std::string::npos);
}

TEST_CASE("doe command writes cells and ranked effects") {
    TempDir tmp;
    TempDir outdir;
    json spec;
    spec["type"] = "doe";
    spec["name"] = "screen";
    spec["base"] = json::parse(tiny_params_json());
    spec["factors"] = json::array({json{{"param", "te7_ms"}, {"low", 4}, {"high", 8}},
                                   json{{"param", "cp"}, {"low", 1}, {"high", 2}}});
    spec["response"] = "mrt_ms";
    spec["backend"] = "solver";
    spec["solver"] = json{{"erlang_k", 1}, {"max_states", 200000}};
    const std::string spec_file = tmp.file("screen.spec", spec.dump());

    CliRun r = run({"doe", spec_file, "--out", outdir.path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("grand mean") != std::string::npos);
    CHECK(r.out.find("te7_ms*cp") != std::string::npos);

    auto csvs = files_with_suffix(outdir.path, ".csv");
    REQUIRE(csvs.size() == 2);  // cells + effects
    fs::path cells, effects;
    for (const auto& p : csvs) {
        if (p.filename().string().find("_cells") != std::string::npos) cells = p;
        if (p.filename().string().find("_effects") != std::string::npos) effects = p;
    }
    REQUIRE(!cells.empty());
    REQUIRE(!effects.empty());

    auto cl = split_lines(slurp(cells));
    REQUIRE(cl.size() == 5);
    CHECK(cl[0] == "te7_ms,cp,mrt_ms");
    CHECK(cl[1].rfind("4,1,", 0) == 0);   // cell 0: all low
    CHECK(cl[2].rfind("8,1,", 0) == 0);   // factor 0 is the fastest bit
    CHECK(cl[3].rfind("4,2,", 0) == 0);
    CHECK(cl[4].rfind("8,2,", 0) == 0);

    auto el = split_lines(slurp(effects));
    REQUIRE(el.size() == 5);  // header + mean + 3 effects
    CHECK(el[0] == "term,effect,percent_of_variation");
    CHECK(el[1].rfind("mean,", 0) == 0);

    const json manifest = json::parse(slurp(files_with_suffix(outdir.path, ".manifest.json")[0]));
    CHECK(manifest.at("outputs").size() == 2);

    // Byte-identical rerun.
    TempDir outdir2;
    CHECK(run({"doe", spec_file, "--out", outdir2.path.string()}).code == 0);
    CHECK(slurp(files_with_suffix(outdir2.path, ".csv")[0]) == slurp(csvs[0]));
    CHECK(slurp(files_with_suffix(outdir2.path, ".csv")[1]) == slurp(csvs[1]));
}

TEST_CASE("simulation evaluations through the cli are reproducible") {
    TempDir tmp;
    TempDir out1, out2;
    const std::string net_file = tmp.file("queue.json", net_to_json(bounded_queue_net(5)).dump());
    const auto args = [&](const TempDir& d) {
        return std::vector<std::string>{"evaluate", net_file,        "--seed",  "42",
                                        "--warmup-ms", "100",        "--batches", "10",
                                        "--batch-ms",  "50",         "--out",   d.path.string()};
    };
    CliRun r1 = run(args(out1));
    CliRun r2 = run(args(out2));
    CHECK(r1.code == r2.code);
    auto c1 = files_with_suffix(out1.path, ".csv");
    auto c2 = files_with_suffix(out2.path, ".csv");
    REQUIRE(c1.size() == 1);
    REQUIRE(c2.size() == 1);
    CHECK(c1[0].filename() == c2[0].filename());
    CHECK(slurp(c1[0]) == slurp(c2[0]));
}

TEST_SUITE_END();
