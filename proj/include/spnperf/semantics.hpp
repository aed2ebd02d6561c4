#pragma once

#include <string_view>
#include <vector>

#include "spnperf/net.hpp"

namespace spnperf {

// Arc + guard check only (no immediate preemption). Used for enabling-memory
// bookkeeping of deterministic transitions, which tick whenever structurally
// enabled, even in markings an immediate will resolve in zero time.
bool transition_enabled(const PetriNet& net, const Marking& m, int t);

// 0 when disabled. For enabled transitions: 1 for single-server, min over input
// arcs of floor(tokens/multiplicity) for infinite-server (1 when there are no
// input arcs). Inhibitors and guards gate but never scale.
std::int32_t enabling_degree(const PetriNet& net, const Marking& m, int t);

// GSPN enabling rule: if any immediate transition is enabled, only the enabled
// immediates of the highest priority are returned; timed transitions otherwise.
std::vector<int> enabled_transition_indices(const PetriNet& net, const Marking& m);
std::vector<std::string> enabled(const PetriNet& net, const Marking& m);

bool marking_vanishing(const PetriNet& net, const Marking& m);

// Unchecked fast path: subtract inputs, add outputs.
void apply_firing(const PetriNet& net, Marking& m, int t);

// Checked, pure. Throws FiringDisabledError when t is not enabled in m,
// UnknownIdError for bad ids.
Marking fire(const PetriNet& net, const Marking& m, int t);
Marking fire(const PetriNet& net, const Marking& m, std::string_view transition_id);

}  // namespace spnperf
