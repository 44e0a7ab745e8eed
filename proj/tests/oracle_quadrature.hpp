#pragma once

// Test-side reference integration, independent of the library's panel
// engine: Gauss-Kronrod from Boost.Math on the real and imaginary parts,
// applied to the unfolded kernel integrands over the full real line.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <functional>

#include "stokes2/params.hpp"

namespace testref {

using Complex = std::complex<double>;
using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

template <class F>
Complex gk(F&& f, double a, double b, double tol = 1e-13) {
  auto re = GK::integrate([&](double t) { return f(t).real(); }, a, b, 15, tol);
  auto im = GK::integrate([&](double t) { return f(t).imag(); }, a, b, 15, tol);
  return {re, im};
}

inline Complex z0(const stokes2::ProblemParams& p) { return {1.0, -p.omega1}; }

// L(k) = 1 - (1/sqrt(pi)) int exp(-t^2)/(z0 + ikt) dt, unfolded
inline Complex L(double k, const stokes2::ProblemParams& p) {
  const Complex zz = z0(p);
  auto f = [&](double t) { return std::exp(-t * t) / (zz + Complex(0.0, k * t)); };
  return 1.0 - (gk(f, -8.0, 0.0) + gk(f, 0.0, 8.0)) / stokes2::kSqrtPi;
}

inline Complex T(int n, double k, const stokes2::ProblemParams& p) {
  const Complex zz = z0(p);
  auto f = [&](double t) {
    return std::exp(-t * t) * std::pow(t, n) / (zz + Complex(0.0, k * t));
  };
  return (gk(f, -8.0, 0.0) + gk(f, 0.0, 8.0)) / stokes2::kSqrtPi;
}

inline Complex T1_abs(double k, const stokes2::ProblemParams& p) {
  const Complex zz = z0(p);
  auto f = [&](double t) {
    return std::exp(-t * t) * std::abs(t) / (zz + Complex(0.0, k * t));
  };
  return (gk(f, -8.0, 0.0) + gk(f, 0.0, 8.0)) / stokes2::kSqrtPi;
}

inline Complex J(double k, double k1, const stokes2::ProblemParams& p) {
  const Complex zz = z0(p);
  auto f = [&](double t) {
    return std::exp(-t * t) * std::abs(t) /
           ((zz + Complex(0.0, k * t)) * (zz + Complex(0.0, k1 * t)));
  };
  return (gk(f, -8.0, 0.0) + gk(f, 0.0, 8.0)) / stokes2::kSqrtPi;
}

inline Complex lambda(Complex z, const stokes2::ProblemParams& p) {
  auto f = [&](double t) { return std::exp(-t * t) / (t - z); };
  Complex cauchy = gk(f, -8.0, z.real()) + gk(f, z.real(), 8.0);
  if (z.real() < -8.0 || z.real() > 8.0) cauchy = gk(f, -8.0, 8.0);
  return z0(p) + z / stokes2::kSqrtPi * cauchy;
}

}  // namespace testref
