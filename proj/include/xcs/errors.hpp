#pragma once

#include <stdexcept>
#include <string>

namespace xcs {

/// Request exceeds a hard resource limit (e.g. dense statevector size).
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// A Pauli expectation required by an RDM element is not present.
struct MissingExpectationError : std::runtime_error {
  explicit MissingExpectationError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Invalid user-supplied configuration (CLI flags, config files).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure (non-Hermitian input, non-convergent solve).
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace xcs
