#pragma once

#include <stdexcept>
#include <string>

namespace stokes2 {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A parameter or configuration value violates a documented invariant.
struct ConfigError : Error {
  using Error::Error;
};

/// An argument lies outside the mathematical domain of an operation
/// (e.g. the dispersion function evaluated on its real-line cut).
struct DomainError : Error {
  using Error::Error;
};

/// A quadrature failed to reach the requested tolerance within its panel
/// budget. Carries the error estimate that was actually achieved.
struct ToleranceError : Error {
  double achieved;
  ToleranceError(const std::string& what, double achieved_err)
      : Error(what + " (achieved error estimate " + std::to_string(achieved_err) + ")"),
        achieved(achieved_err) {}
};

/// |L(k)| is numerically zero on the grid; omega1 is too close to the
/// hydrodynamic limit where L(0) = 0.
struct DegeneracyError : Error {
  double k;
  DegeneracyError(const std::string& what, double k_node)
      : Error(what + " (at k = " + std::to_string(k_node) + ")"), k(k_node) {}
};

/// A grid is too coarse for the requested evaluation.
struct ResolutionError : Error {
  using Error::Error;
};

/// The dense solve is numerically ill-conditioned.
struct ConditioningError : Error {
  double rcond;
  ConditioningError(const std::string& what, double rcond_)
      : Error(what + " (reciprocal condition estimate " + std::to_string(rcond_) + ")"),
        rcond(rcond_) {}
};

}  // namespace stokes2
