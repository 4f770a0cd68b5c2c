#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ctexp {

// Raised when an enumeration outgrows its element cap. Carries how many
// elements were produced before the abort.
struct CapExceededError : std::runtime_error {
  uint64_t partial_count;
  explicit CapExceededError(uint64_t n)
      : std::runtime_error("element cap exceeded after " + std::to_string(n) +
                           " elements"),
        partial_count(n) {}
};

}  // namespace ctexp
