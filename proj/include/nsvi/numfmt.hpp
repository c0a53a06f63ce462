#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace nsvi {

/// Shortest decimal string that parses back to exactly x. Used for CSV
/// output, where byte-identical reruns matter more than fixed width.
inline std::string fmt_shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

/// Fixed 17-significant-digit scientific form, enough to round-trip any
/// double. Used for MDP and trace files.
inline std::string fmt_full(double x) {
  char buf[64];
  const int len = std::snprintf(buf, sizeof(buf), "%.16e", x);
  return std::string(buf, buf + len);
}

}  // namespace nsvi
