#pragma once

#include <cstdio>
#include <string>

namespace pbec {

// Non-fatal diagnostics. The handler is process-global; tests may swap it to
// capture messages. Warnings never touch output files, so swapping the sink
// cannot change emitted artifacts.
using WarnHandler = void (*)(const std::string&);

inline void default_warn_handler(const std::string& msg) {
  std::fprintf(stderr, "pbec: warning: %s\n", msg.c_str());
}

inline WarnHandler& warn_handler() {
  static WarnHandler h = &default_warn_handler;
  return h;
}

inline void warn(const std::string& msg) { warn_handler()(msg); }

}  // namespace pbec
