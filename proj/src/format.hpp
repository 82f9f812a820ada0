#pragma once

#include <cstdio>
#include <string>

namespace lpmono::internal {

// Short form for error messages and validation details.
inline std::string fmt_g(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.6g", v);
  return b;
}

// Full round-trip precision for serialized output.
inline std::string fmt_full(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

}  // namespace lpmono::internal
