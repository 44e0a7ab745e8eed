#pragma once

#include <cmath>
#include <complex>

#include "stokes2/errors.hpp"

namespace stokes2 {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrtPi = 1.7724538509055160273;

/// Dimensionless parameters of the oscillating-wall problem: oscillation
/// frequency omega1 (in units of the collision frequency), diffuseness
/// (accommodation) coefficient q of the specular-diffuse wall, and wall
/// velocity amplitude u0 (in units of the thermal velocity).
struct ProblemParams {
  double omega1 = 1.0;
  double q = 1.0;
  double u0 = 1.0;

  /// Complex relaxation shift z0 = 1 - i*omega1. Re z0 = 1 keeps every
  /// kernel denominator away from zero on the real axis.
  Complex z0() const { return Complex(1.0, -omega1); }

  void validate() const {
    if (!std::isfinite(omega1) || !(omega1 > 0.0))
      throw ConfigError("omega1 must be finite and > 0 (L(0) degenerates as omega1 -> 0)");
    if (!std::isfinite(q) || q < 0.0 || q > 1.0)
      throw ConfigError("q must lie in [0, 1]");
    if (!std::isfinite(u0) || !(u0 > 0.0))
      throw ConfigError("u0 must be finite and > 0");
  }
};

/// Controls for the Gaussian-weight kernel quadratures.
struct QuadratureSpec {
  double t_cutoff = 7.0;     // exp(-t^2) < 2.4e-16 beyond t = 6
  int nodes_per_panel = 32;
  double rel_tol = 1e-10;
  int max_panels = 64;

  void validate() const {
    if (!std::isfinite(t_cutoff) || t_cutoff < 6.0)
      throw ConfigError("t_cutoff must be >= 6");
    if (nodes_per_panel < 4)
      throw ConfigError("nodes_per_panel must be >= 4");
    if (!std::isfinite(rel_tol) || !(rel_tol > 0.0))
      throw ConfigError("rel_tol must be > 0");
    if (max_panels < 1)
      throw ConfigError("max_panels must be >= 1");
  }
};

}  // namespace stokes2
