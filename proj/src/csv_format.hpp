#pragma once

#include <cstdio>
#include <string>

namespace ibtree::csv {

/// Fixed 12-significant-digit rendering so CSV output is byte-stable.
inline std::string num(double v) {
  if (v == 0.0) v = 0.0;  // fold -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace ibtree::csv
