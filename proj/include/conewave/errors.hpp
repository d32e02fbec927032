#pragma once

#include <stdexcept>

namespace conewave {

// Invalid user configuration or operation precondition (exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Query outside the simulated window or grid.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerical breakdown during a run (exit code 3).
struct RuntimeAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace conewave
