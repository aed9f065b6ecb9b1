#pragma once

// Diagnostic logging to stderr, enabled by setting the STRATA_LOG environment
// variable (any nonempty value; "debug" enables the chattier messages).

#include <cstdlib>
#include <iostream>
#include <string>

namespace strata {

inline bool log_enabled() {
  const char* v = std::getenv("STRATA_LOG");
  return v != nullptr && *v != '\0';
}

inline void log(const std::string& msg) {
  if (log_enabled()) std::cerr << "[strata] " << msg << "\n";
}

}  // namespace strata
