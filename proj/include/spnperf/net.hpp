#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "spnperf/guard.hpp"

namespace spnperf {

enum class TransitionKind { Immediate, Exponential, Deterministic };

// Timed transitions fire one token set at a time either way; Infinite scales the
// firing rate by the enabling degree (min over input arcs of tokens/multiplicity),
// giving k-server stations when capacity places bound the degree. Deterministic
// transitions are always single-server.
enum class ServerSemantics { Single, Infinite };

enum class ArcKind { Input, Output, Inhibitor };

struct Place {
    std::string id;
    std::int32_t initial_tokens = 0;
};

// Pre-compilation description; guards are carried as text and parsed when the
// net is built (all places are known by then).
struct TransitionSpec {
    std::string id;
    TransitionKind kind = TransitionKind::Immediate;
    double delay_ms = 0.0;  // exponential: mean; deterministic: fixed delay
    double weight = 1.0;    // immediate only
    int priority = 1;       // immediate only, higher fires first
    ServerSemantics servers = ServerSemantics::Single;
    std::string guard;      // empty = always true
};

struct ArcSpec {
    std::string from;
    std::string to;
    std::int32_t multiplicity = 1;
    ArcKind kind = ArcKind::Input;  // Input/Output inferred from endpoints; Inhibitor explicit
};

// Dense token vector in place-declaration order.
using Marking = std::vector<std::int32_t>;

class PetriNet {
public:
    struct Arc {
        std::int32_t place;
        std::int32_t multiplicity;
    };
    struct Transition {
        std::string id;
        TransitionKind kind;
        double delay_ms;
        double weight;
        int priority;
        ServerSemantics servers;
        std::optional<GuardExpr> guard;
        std::string guard_text;
        std::vector<Arc> inputs;
        std::vector<Arc> outputs;
        std::vector<Arc> inhibitors;
    };

    // Validates everything: unique ids, arcs connect a place and a transition,
    // positive delays/weights/multiplicities, priority >= 1, guards parse and
    // reference known places. Throws ValidationError / GuardParseError / UnknownIdError.
    PetriNet(std::string name, std::vector<Place> places, std::vector<TransitionSpec> transitions,
             std::vector<ArcSpec> arcs);

    const std::string& name() const { return name_; }
    int place_count() const { return static_cast<int>(places_.size()); }
    int transition_count() const { return static_cast<int>(transitions_.size()); }
    const Place& place(int i) const { return places_[static_cast<std::size_t>(i)]; }
    const Transition& transition(int i) const { return transitions_[static_cast<std::size_t>(i)]; }
    const std::vector<Place>& places() const { return places_; }
    const std::vector<Transition>& transitions() const { return transitions_; }

    int place_index(std::string_view id) const;       // -1 when unknown
    int transition_index(std::string_view id) const;  // -1 when unknown

    Marking initial_marking() const;

    bool has_deterministic() const { return has_deterministic_; }

    // Original arc list (for serialization).
    const std::vector<ArcSpec>& arc_specs() const { return arc_specs_; }

private:
    std::string name_;
    std::vector<Place> places_;
    std::vector<Transition> transitions_;
    std::vector<ArcSpec> arc_specs_;
    std::unordered_map<std::string, int> place_idx_;
    std::unordered_map<std::string, int> transition_idx_;
    bool has_deterministic_ = false;
};

// Fluent construction helper used by tests and the HLF model builder.
class NetBuilder {
public:
    NetBuilder& place(std::string id, std::int32_t tokens = 0);
    NetBuilder& immediate(std::string id, double weight = 1.0, int priority = 1, std::string guard = "");
    NetBuilder& exponential(std::string id, double mean_ms, std::string guard = "",
                            ServerSemantics servers = ServerSemantics::Single);
    NetBuilder& deterministic(std::string id, double delay_ms, std::string guard = "");
    // Input or output inferred from which endpoint is a place.
    NetBuilder& arc(std::string from, std::string to, std::int32_t multiplicity = 1);
    NetBuilder& inhibitor(std::string place, std::string transition, std::int32_t multiplicity = 1);
    PetriNet build(std::string name);

private:
    std::vector<Place> places_;
    std::vector<TransitionSpec> transitions_;
    std::vector<ArcSpec> arcs_;
};

}  // namespace spnperf
