#pragma once

#include <stdexcept>
#include <string>

namespace vstatic {

/// A caller-supplied argument violates an operation's precondition.
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A finite-difference stencil would leave the chart domain.
struct StencilError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Level-set quantities requested where the potential has vanishing gradient.
struct CriticalPointError : std::domain_error {
  using std::domain_error::domain_error;
};

/// The warping ODE integrator could not continue the trajectory.
struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw PreconditionError(message);
}

}  // namespace vstatic
