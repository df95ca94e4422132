#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace divopt {

// Raised for malformed configuration: unknown keys, missing keys, values
// outside their documented ranges. Maps to process exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for runtime numeric failures: non-finite oracle output, non-finite
// arithmetic inside a step. Maps to process exit code 2.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A pairwise distance at or below the configured floor. Carries the
// offending pair so callers can report it or apply the degenerate policy.
class CoincidentParticlesError : public NumericError {
 public:
  CoincidentParticlesError(std::size_t i, std::size_t j)
      : NumericError("coincident particles (" + std::to_string(i) + ", " +
                     std::to_string(j) + "): pairwise distance at or below floor"),
        first(i),
        second(j) {}

  std::size_t first;
  std::size_t second;
};

}  // namespace divopt
