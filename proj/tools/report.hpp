#pragma once

#include <cstdio>
#include <string>

namespace covert_mimo::cli {

// Fixed-format double rendering so identical invocations emit byte-identical
// reports regardless of locale or stream state.
inline std::string fmt_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace covert_mimo::cli
