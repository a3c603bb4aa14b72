#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace susyxxz {

/// Shortest decimal text that parses back to exactly `value`.
inline std::string shortest_decimal(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

/// CSV cell: shortest round-trip text, or empty for undefined (NaN) values.
inline std::string csv_cell(double value) {
  return std::isnan(value) ? std::string{} : shortest_decimal(value);
}

}  // namespace susyxxz
