#include "spnperf/net_json.hpp"

#include <fstream>

#include "spnperf/errors.hpp"

namespace spnperf {
namespace {

using nlohmann::json;

[[noreturn]] void shape_error(const std::string& what) { throw ValidationError(what); }

const json& require(const json& j, const char* key, const char* ctx) {
    auto it = j.find(key);
    if (it == j.end()) shape_error(std::string(ctx) + " is missing required key '" + key + "'");
    return *it;
}

std::string as_string(const json& j, const char* what) {
    if (!j.is_string()) shape_error(std::string(what) + " must be a string");
    return j.get<std::string>();
}

std::int64_t as_int(const json& j, const char* what) {
    if (!j.is_number_integer()) shape_error(std::string(what) + " must be an integer");
    return j.get<std::int64_t>();
}

double as_number(const json& j, const char* what) {
    if (!j.is_number()) shape_error(std::string(what) + " must be a number");
    return j.get<double>();
}

TransitionKind parse_kind(const std::string& s, const std::string& id) {
    if (s == "immediate") return TransitionKind::Immediate;
    if (s == "exponential") return TransitionKind::Exponential;
    if (s == "deterministic") return TransitionKind::Deterministic;
    shape_error("transition '" + id + "' has unknown kind '" + s +
                "' (expected immediate, exponential, or deterministic)");
}

ServerSemantics parse_servers(const std::string& s, const std::string& id) {
    if (s == "single") return ServerSemantics::Single;
    if (s == "infinite") return ServerSemantics::Infinite;
    shape_error("transition '" + id + "' has unknown servers value '" + s +
                "' (expected single or infinite)");
}

const char* kind_name(TransitionKind k) {
    switch (k) {
        case TransitionKind::Immediate: return "immediate";
        case TransitionKind::Exponential: return "exponential";
        case TransitionKind::Deterministic: return "deterministic";
    }
    return "?";
}

}  // namespace

PetriNet net_from_json(const json& j) {
    if (!j.is_object()) shape_error("net document must be a JSON object");

    std::string name = "net";
    if (auto it = j.find("name"); it != j.end()) name = as_string(*it, "net name");

    std::vector<Place> places;
    const json& jp = require(j, "places", "net document");
    if (!jp.is_array()) shape_error("'places' must be an array");
    for (const json& p : jp) {
        if (!p.is_object()) shape_error("each place must be an object");
        Place pl;
        pl.id = as_string(require(p, "id", "place"), "place id");
        if (auto it = p.find("tokens"); it != p.end())
            pl.initial_tokens = static_cast<std::int32_t>(as_int(*it, "place tokens"));
        places.push_back(std::move(pl));
    }

    std::vector<TransitionSpec> transitions;
    const json& jt = require(j, "transitions", "net document");
    if (!jt.is_array()) shape_error("'transitions' must be an array");
    for (const json& t : jt) {
        if (!t.is_object()) shape_error("each transition must be an object");
        TransitionSpec ts;
        ts.id = as_string(require(t, "id", "transition"), "transition id");
        ts.kind = parse_kind(as_string(require(t, "kind", "transition"), "transition kind"), ts.id);
        if (auto it = t.find("delay_ms"); it != t.end())
            ts.delay_ms = as_number(*it, "transition delay_ms");
        else if (ts.kind != TransitionKind::Immediate)
            shape_error("timed transition '" + ts.id + "' is missing delay_ms");
        if (auto it = t.find("weight"); it != t.end()) ts.weight = as_number(*it, "weight");
        if (auto it = t.find("priority"); it != t.end())
            ts.priority = static_cast<int>(as_int(*it, "priority"));
        if (auto it = t.find("servers"); it != t.end())
            ts.servers = parse_servers(as_string(*it, "servers"), ts.id);
        if (auto it = t.find("guard"); it != t.end()) ts.guard = as_string(*it, "guard");
        transitions.push_back(std::move(ts));
    }

    std::vector<ArcSpec> arcs;
    if (auto jit = j.find("arcs"); jit != j.end()) {
        if (!jit->is_array()) shape_error("'arcs' must be an array");
        for (const json& a : *jit) {
            if (!a.is_object()) shape_error("each arc must be an object");
            ArcSpec as;
            as.from = as_string(require(a, "from", "arc"), "arc from");
            as.to = as_string(require(a, "to", "arc"), "arc to");
            if (auto it = a.find("mult"); it != a.end())
                as.multiplicity = static_cast<std::int32_t>(as_int(*it, "arc mult"));
            if (auto it = a.find("kind"); it != a.end()) {
                const std::string k = as_string(*it, "arc kind");
                if (k == "inhibitor") {
                    as.kind = ArcKind::Inhibitor;
                } else if (k == "input") {
                    as.kind = ArcKind::Input;
                } else if (k == "output") {
                    as.kind = ArcKind::Output;
                } else {
                    shape_error("arc " + as.from + " -> " + as.to + " has unknown kind '" + k +
                                "' (expected input, output, or inhibitor)");
                }
            }
            arcs.push_back(std::move(as));
        }
    }

    PetriNet net(std::move(name), std::move(places), std::move(transitions), std::move(arcs));

    // Declared directions must agree with the endpoints the constructor resolved.
    for (const ArcSpec& a : net.arc_specs()) {
        if (a.kind == ArcKind::Input && net.place_index(a.from) < 0)
            shape_error("arc " + a.from + " -> " + a.to +
                        " is declared input but does not run from a place to a transition");
        if (a.kind == ArcKind::Output && net.transition_index(a.from) < 0)
            shape_error("arc " + a.from + " -> " + a.to +
                        " is declared output but does not run from a transition to a place");
    }
    return net;
}

json net_to_json(const PetriNet& net) {
    json j;
    j["name"] = net.name();
    json places = json::array();
    for (const Place& p : net.places()) {
        places.push_back({{"id", p.id}, {"tokens", p.initial_tokens}});
    }
    j["places"] = std::move(places);

    json transitions = json::array();
    for (const auto& t : net.transitions()) {
        json jt;
        jt["id"] = t.id;
        jt["kind"] = kind_name(t.kind);
        if (t.kind == TransitionKind::Immediate) {
            jt["weight"] = t.weight;
            jt["priority"] = t.priority;
        } else {
            jt["delay_ms"] = t.delay_ms;
            if (t.servers == ServerSemantics::Infinite) jt["servers"] = "infinite";
        }
        if (!t.guard_text.empty()) jt["guard"] = t.guard_text;
        transitions.push_back(std::move(jt));
    }
    j["transitions"] = std::move(transitions);

    json arcs = json::array();
    for (const ArcSpec& a : net.arc_specs()) {
        json ja;
        ja["from"] = a.from;
        ja["to"] = a.to;
        ja["mult"] = a.multiplicity;
        ja["kind"] = a.kind == ArcKind::Inhibitor ? "inhibitor"
                     : net.place_index(a.from) >= 0 ? "input"
                                                    : "output";
        arcs.push_back(std::move(ja));
    }
    j["arcs"] = std::move(arcs);
    return j;
}

PetriNet load_net_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open net file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ValidationError("net file '" + path + "' is not valid JSON: " + e.what());
    }
    return net_from_json(j);
}

}  // namespace spnperf
