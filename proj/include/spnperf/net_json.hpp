#pragma once

#include <string>

#include "json.hpp"
#include "spnperf/net.hpp"

namespace spnperf {

// Interchange schema:
//   { "name": str?,
//     "places":      [ {"id": str, "tokens": int? } ],
//     "transitions": [ {"id": str, "kind": "immediate"|"exponential"|"deterministic",
//                       "delay_ms": num?, "weight": num?, "priority": int?,
//                       "servers": "single"|"infinite"?, "guard": str? } ],
//     "arcs":        [ {"from": str, "to": str, "mult": int?,
//                       "kind": "input"|"output"|"inhibitor"? } ] }
// Direction of normal arcs follows the endpoints; "kind" is checked against them
// when present. Malformed shapes raise ValidationError; semantic problems raise
// whatever PetriNet's constructor raises.
PetriNet net_from_json(const nlohmann::json& j);
nlohmann::json net_to_json(const PetriNet& net);

PetriNet load_net_file(const std::string& path);

}  // namespace spnperf
