#pragma once

#include <stdexcept>
#include <string>

namespace ramanpol {

// Precondition violations throw std::invalid_argument. The types below carry
// failures that the CLI maps onto distinct exit codes.

/// Malformed or inconsistent configuration (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unstable or unresolvable numerics, including failed root finds (exit code 2).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Not enough data for a statistic to be meaningful.
class InsufficientData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace ramanpol
