#include "spnperf/semantics.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "spnperf/errors.hpp"

namespace spnperf {

bool transition_enabled(const PetriNet& net, const Marking& m, int t) {
    const PetriNet::Transition& tr = net.transitions()[static_cast<std::size_t>(t)];
    for (const PetriNet::Arc& a : tr.inputs) {
        if (m[static_cast<std::size_t>(a.place)] < a.multiplicity) return false;
    }
    for (const PetriNet::Arc& a : tr.inhibitors) {
        if (m[static_cast<std::size_t>(a.place)] >= a.multiplicity) return false;
    }
    if (tr.guard && !tr.guard->eval(m)) return false;
    return true;
}

std::int32_t enabling_degree(const PetriNet& net, const Marking& m, int t) {
    if (!transition_enabled(net, m, t)) return 0;
    const PetriNet::Transition& tr = net.transitions()[static_cast<std::size_t>(t)];
    if (tr.servers == ServerSemantics::Single) return 1;
    if (tr.inputs.empty()) return 1;
    std::int32_t degree = std::numeric_limits<std::int32_t>::max();
    for (const PetriNet::Arc& a : tr.inputs) {
        degree = std::min(degree, m[static_cast<std::size_t>(a.place)] / a.multiplicity);
    }
    return degree;
}

std::vector<int> enabled_transition_indices(const PetriNet& net, const Marking& m) {
    std::vector<int> timed;
    std::vector<int> immediates;
    int top_priority = 0;
    const auto& trs = net.transitions();
    for (int t = 0; t < static_cast<int>(trs.size()); ++t) {
        if (!transition_enabled(net, m, t)) continue;
        const PetriNet::Transition& tr = trs[static_cast<std::size_t>(t)];
        if (tr.kind == TransitionKind::Immediate) {
            if (tr.priority > top_priority) {
                top_priority = tr.priority;
                immediates.clear();
            }
            if (tr.priority == top_priority) immediates.push_back(t);
        } else {
            timed.push_back(t);
        }
    }
    return immediates.empty() ? timed : immediates;
}

std::vector<std::string> enabled(const PetriNet& net, const Marking& m) {
    std::vector<std::string> ids;
    for (int t : enabled_transition_indices(net, m)) {
        ids.push_back(net.transitions()[static_cast<std::size_t>(t)].id);
    }
    return ids;
}

bool marking_vanishing(const PetriNet& net, const Marking& m) {
    const auto& trs = net.transitions();
    for (int t = 0; t < static_cast<int>(trs.size()); ++t) {
        if (trs[static_cast<std::size_t>(t)].kind == TransitionKind::Immediate &&
            transition_enabled(net, m, t)) {
            return true;
        }
    }
    return false;
}

void apply_firing(const PetriNet& net, Marking& m, int t) {
    const PetriNet::Transition& tr = net.transitions()[static_cast<std::size_t>(t)];
    for (const PetriNet::Arc& a : tr.inputs) m[static_cast<std::size_t>(a.place)] -= a.multiplicity;
    for (const PetriNet::Arc& a : tr.outputs) m[static_cast<std::size_t>(a.place)] += a.multiplicity;
}

Marking fire(const PetriNet& net, const Marking& m, int t) {
    if (t < 0 || t >= static_cast<int>(net.transitions().size())) {
        throw UnknownIdError("transition index out of range", std::to_string(t));
    }
    if (m.size() != net.places().size()) {
        throw ValidationError("marking size does not match net place count");
    }
    const std::vector<int> firable = enabled_transition_indices(net, m);
    if (std::find(firable.begin(), firable.end(), t) == firable.end()) {
        throw FiringDisabledError("transition '" + net.transitions()[static_cast<std::size_t>(t)].id +
                                  "' is not firable in the given marking");
    }
    Marking next = m;
    apply_firing(net, next, t);
    return next;
}

Marking fire(const PetriNet& net, const Marking& m, std::string_view transition_id) {
    const int t = net.transition_index(transition_id);
    if (t < 0) {
        throw UnknownIdError("unknown transition '" + std::string(transition_id) + "'",
                             std::string(transition_id));
    }
    return fire(net, m, t);
}

}  // namespace spnperf
