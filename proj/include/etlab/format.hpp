#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace etlab {

/// Printed form of a float: 12 significant digits.
inline std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// x rounded to 12 significant digits, so JSON output carries no more.
inline double round_sig(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  return std::stod(format_double(x));
}

}  // namespace etlab
