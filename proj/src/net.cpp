#include "spnperf/net.hpp"

#include <algorithm>

#include "spnperf/errors.hpp"

namespace spnperf {

PetriNet::PetriNet(std::string name, std::vector<Place> places,
                   std::vector<TransitionSpec> transitions, std::vector<ArcSpec> arcs)
    : name_(std::move(name)), places_(std::move(places)), arc_specs_(std::move(arcs)) {
    for (std::size_t i = 0; i < places_.size(); ++i) {
        const Place& p = places_[i];
        if (p.id.empty()) throw ValidationError("place with empty id");
        if (p.initial_tokens < 0)
            throw ValidationError("place '" + p.id + "' has negative initial marking");
        if (!place_idx_.emplace(p.id, static_cast<int>(i)).second)
            throw ValidationError("duplicate place id '" + p.id + "'");
    }

    transitions_.reserve(transitions.size());
    for (std::size_t i = 0; i < transitions.size(); ++i) {
        TransitionSpec& t = transitions[i];
        if (t.id.empty()) throw ValidationError("transition with empty id");
        if (place_idx_.count(t.id))
            throw ValidationError("id '" + t.id + "' used for both a place and a transition");
        if (!transition_idx_.emplace(t.id, static_cast<int>(i)).second)
            throw ValidationError("duplicate transition id '" + t.id + "'");

        Transition ct;
        ct.id = t.id;
        ct.kind = t.kind;
        ct.delay_ms = t.delay_ms;
        ct.weight = t.weight;
        ct.priority = t.priority;
        ct.servers = t.servers;
        ct.guard_text = t.guard;
        switch (t.kind) {
            case TransitionKind::Immediate:
                if (!(t.weight > 0.0))
                    throw ValidationError("immediate transition '" + t.id + "' needs weight > 0");
                if (t.priority < 1)
                    throw ValidationError("immediate transition '" + t.id + "' needs priority >= 1");
                break;
            case TransitionKind::Exponential:
                if (!(t.delay_ms > 0.0))
                    throw ValidationError("exponential transition '" + t.id + "' needs mean delay > 0");
                break;
            case TransitionKind::Deterministic:
                if (!(t.delay_ms > 0.0))
                    throw ValidationError("deterministic transition '" + t.id + "' needs delay > 0");
                if (t.servers == ServerSemantics::Infinite)
                    throw ValidationError("deterministic transition '" + t.id +
                                          "' cannot be infinite-server");
                has_deterministic_ = true;
                break;
        }
        if (!t.guard.empty()) {
            ct.guard = GuardExpr::parse(t.guard, [this](std::string_view id) {
                auto it = place_idx_.find(std::string(id));
                return it == place_idx_.end() ? -1 : it->second;
            });
        }
        transitions_.push_back(std::move(ct));
    }

    for (const ArcSpec& a : arc_specs_) {
        if (a.multiplicity < 1)
            throw ValidationError("arc " + a.from + " -> " + a.to + " has multiplicity < 1");
        auto pf = place_idx_.find(a.from);
        auto pt = place_idx_.find(a.to);
        auto tf = transition_idx_.find(a.from);
        auto tt = transition_idx_.find(a.to);

        if (a.kind == ArcKind::Inhibitor) {
            if (pf == place_idx_.end() || tt == transition_idx_.end())
                throw ValidationError("inhibitor arc must run from a place to a transition: " +
                                      a.from + " -> " + a.to);
            transitions_[static_cast<std::size_t>(tt->second)].inhibitors.push_back(
                {pf->second, a.multiplicity});
            continue;
        }
        if (pf != place_idx_.end() && tt != transition_idx_.end()) {
            transitions_[static_cast<std::size_t>(tt->second)].inputs.push_back(
                {pf->second, a.multiplicity});
        } else if (tf != transition_idx_.end() && pt != place_idx_.end()) {
            transitions_[static_cast<std::size_t>(tf->second)].outputs.push_back(
                {pt->second, a.multiplicity});
        } else if (pf != place_idx_.end() && pt != place_idx_.end()) {
            throw ValidationError("arc connects two places: " + a.from + " -> " + a.to);
        } else if (tf != transition_idx_.end() && tt != transition_idx_.end()) {
            throw ValidationError("arc connects two transitions: " + a.from + " -> " + a.to);
        } else {
            const std::string& missing =
                (pf == place_idx_.end() && tf == transition_idx_.end()) ? a.from : a.to;
            throw UnknownIdError("arc references unknown node '" + missing + "'", missing);
        }
    }

    // Coalesce duplicate arcs so enabling checks and firing agree: parallel
    // input/output arcs add up, parallel inhibitors keep the tightest bound.
    auto coalesce = [](std::vector<Arc>& arcs, bool sum) {
        std::vector<Arc> out;
        for (const Arc& a : arcs) {
            auto it = std::find_if(out.begin(), out.end(),
                                   [&](const Arc& b) { return b.place == a.place; });
            if (it == out.end())
                out.push_back(a);
            else if (sum)
                it->multiplicity += a.multiplicity;
            else
                it->multiplicity = std::min(it->multiplicity, a.multiplicity);
        }
        arcs = std::move(out);
    };
    for (Transition& t : transitions_) {
        coalesce(t.inputs, true);
        coalesce(t.outputs, true);
        coalesce(t.inhibitors, false);
    }
}

int PetriNet::place_index(std::string_view id) const {
    auto it = place_idx_.find(std::string(id));
    return it == place_idx_.end() ? -1 : it->second;
}

int PetriNet::transition_index(std::string_view id) const {
    auto it = transition_idx_.find(std::string(id));
    return it == transition_idx_.end() ? -1 : it->second;
}

Marking PetriNet::initial_marking() const {
    Marking m(places_.size());
    for (std::size_t i = 0; i < places_.size(); ++i) m[i] = places_[i].initial_tokens;
    return m;
}

NetBuilder& NetBuilder::place(std::string id, std::int32_t tokens) {
    places_.push_back({std::move(id), tokens});
    return *this;
}

NetBuilder& NetBuilder::immediate(std::string id, double weight, int priority, std::string guard) {
    TransitionSpec t;
    t.id = std::move(id);
    t.kind = TransitionKind::Immediate;
    t.weight = weight;
    t.priority = priority;
    t.guard = std::move(guard);
    transitions_.push_back(std::move(t));
    return *this;
}

NetBuilder& NetBuilder::exponential(std::string id, double mean_ms, std::string guard,
                                    ServerSemantics servers) {
    TransitionSpec t;
    t.id = std::move(id);
    t.kind = TransitionKind::Exponential;
    t.delay_ms = mean_ms;
    t.guard = std::move(guard);
    t.servers = servers;
    transitions_.push_back(std::move(t));
    return *this;
}

NetBuilder& NetBuilder::deterministic(std::string id, double delay_ms, std::string guard) {
    TransitionSpec t;
    t.id = std::move(id);
    t.kind = TransitionKind::Deterministic;
    t.delay_ms = delay_ms;
    t.guard = std::move(guard);
    transitions_.push_back(std::move(t));
    return *this;
}

NetBuilder& NetBuilder::arc(std::string from, std::string to, std::int32_t multiplicity) {
    arcs_.push_back({std::move(from), std::move(to), multiplicity, ArcKind::Input});
    return *this;
}

NetBuilder& NetBuilder::inhibitor(std::string place, std::string transition,
                                  std::int32_t multiplicity) {
    arcs_.push_back({std::move(place), std::move(transition), multiplicity, ArcKind::Inhibitor});
    return *this;
}

PetriNet NetBuilder::build(std::string name) {
    return PetriNet(std::move(name), std::move(places_), std::move(transitions_), std::move(arcs_));
}

}  // namespace spnperf
