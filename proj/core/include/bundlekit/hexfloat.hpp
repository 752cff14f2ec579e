#pragma once

#include <string>
#include <string_view>

namespace bundlekit {

/// Exact hexadecimal representation of a double ("%a").
std::string hexfloat(double value);

/// Parses any strtod-accepted token (hex or decimal); throws ConfigError on
/// garbage.
double parse_hexfloat(std::string_view token);

/// Shortest decimal string that round-trips to the same double.
std::string shortest_decimal(double value);

}  // namespace bundlekit
