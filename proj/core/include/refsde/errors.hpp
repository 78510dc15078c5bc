#pragma once

#include <stdexcept>
#include <string>

namespace refsde {

/// Bad or inconsistent user input: config files, CLI values, unknown names.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structural invariant of the data was violated (states outside the
/// barrier interval, complementarity failures, x0 outside the domain, ...).
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure: non-integrable densities, degenerate denominators,
/// quadrature that cannot reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exit-code contract shared by the CLI and its tests.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInvariant = 3;
inline constexpr int kExitNumerical = 4;

}  // namespace refsde
