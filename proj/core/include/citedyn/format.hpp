#pragma once

#include <cstdio>
#include <string>

namespace citedyn {

/// Floating-point rendering used by every emitted CSV: 6 significant digits.
inline std::string format_sig6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

/// Fixed 6-decimal rendering (used where exact zeros must read "0.000000").
inline std::string format_fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace citedyn
