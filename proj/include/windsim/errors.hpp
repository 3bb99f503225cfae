// Error types shared by the simulator modules.
#pragma once

#include <stdexcept>
#include <string>

namespace windsim {

/// A parameter set or input value violates its documented invariants.
class InvalidParameter : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Query point outside the domain covered by a tabulated series.
class RangeError : public std::out_of_range {
  public:
    using std::out_of_range::out_of_range;
};

/// The turbulence time scale T = L / vbar is undefined (vbar <= 0) or too
/// short for the configured step.
class SingularTimescale : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// The drive train was asked to integrate outside its valid speed range.
/// Raised only when the mode machine lets the rotor run away towards zero.
class IntegrationDomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Cp cannot be rescaled to hit the nominal operating point.
class CalibrationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// The equilibrium equation has no bracketed root; Cp coefficients and the
/// speed/power references are inconsistent.
class ModelInconsistency : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A trajectory produced a non-finite state.
class SimulationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace windsim
