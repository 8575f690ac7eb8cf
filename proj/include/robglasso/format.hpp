#pragma once

#include <charconv>
#include <cmath>
#include <optional>
#include <string>

namespace robglasso {

/// 17 significant digits; "Inf"/"-Inf"/"NaN" for non-finite values.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string("NA");
}

}  // namespace robglasso
