#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace campana {

// Rounds to 12 significant digits so that serializers emit at most 12.
inline double fmt12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

inline std::string str12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace campana
