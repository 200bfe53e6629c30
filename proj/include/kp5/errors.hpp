#pragma once

#include <stdexcept>
#include <string>

namespace kp5 {

// Frequency-domain operation evaluated at xi = 0 where the symbol is singular.
struct SingularFrequencyError : std::domain_error {
  explicit SingularFrequencyError(const std::string& what) : std::domain_error(what) {}
};

// Input field violates a precondition (missing zero x-mean, wrong lattice, ...).
struct RejectedInputError : std::invalid_argument {
  explicit RejectedInputError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical blow-up detected during time stepping.
struct BlowUpError : std::runtime_error {
  BlowUpError(const std::string& what, double t) : std::runtime_error(what), time(t) {}
  double time;
};

// Invalid configuration or command-line usage.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kp5
