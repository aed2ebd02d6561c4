#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spnperf {

// Exit codes: 0 ok, 1 usage/internal, 2 validation failure, 3 state space
// exceeded, 4 nonconvergence.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spnperf
