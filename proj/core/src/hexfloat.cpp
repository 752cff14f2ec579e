#include "bundlekit/hexfloat.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "bundlekit/errors.hpp"

namespace bundlekit {

std::string hexfloat(double value) {
  char buf[64];
  const int len = std::snprintf(buf, sizeof buf, "%a", value);
  return std::string(buf, static_cast<std::size_t>(len));
}

double parse_hexfloat(std::string_view token) {
  const std::string text(token);
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size())
    throw ConfigError("cannot parse number '" + text + "'");
  return value;
}

std::string shortest_decimal(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

}  // namespace bundlekit
