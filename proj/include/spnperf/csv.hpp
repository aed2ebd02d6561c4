#pragma once

#include <string>
#include <vector>

namespace spnperf {

// Shortest round-trip decimal form (std::to_chars); "nan"/"inf" spelled out.
std::string format_double(double v);

// RFC-4180: fields containing comma, quote, CR or LF are quoted, quotes doubled.
std::string csv_field(const std::string& raw);

std::string csv_line(const std::vector<std::string>& fields);  // includes trailing \n

}  // namespace spnperf
