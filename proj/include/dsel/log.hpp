#pragma once

#include <atomic>
#include <iostream>
#include <string_view>

namespace dsel {

inline std::atomic<bool>& warnings_enabled() {
  static std::atomic<bool> enabled{true};
  return enabled;
}

inline void warn(std::string_view message) {
  if (warnings_enabled()) std::cerr << "warning: " << message << '\n';
}

}  // namespace dsel
