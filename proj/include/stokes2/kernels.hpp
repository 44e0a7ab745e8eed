#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "stokes2/params.hpp"
#include "stokes2/quadrature.hpp"

namespace stokes2 {

// The complex kernels of the characteristic equation. Every kernel is a
// moment of exp(-t^2) against rational factors of t. Folding t -> -t pairs
// onto t >= 0 turns each denominator into z0^2 + k^2 t^2, whose modulus is
// bounded below (Re z0 = 1, Im z0^2 = -2 omega1), so the integrands are
// smooth on the real axis; evenness in k and the symmetry of J become exact
// properties of the implementation rather than quadrature accidents.

namespace detail {

// Panel seed points on [0, cutoff], refined where |z0^2 + k^2 t^2| dips
// (t ~ sqrt(omega1^2 - 1)/|k| when omega1 > 1).
inline std::vector<double> kernel_breakpoints(double k, const ProblemParams& p,
                                              const QuadratureSpec& spec) {
  std::vector<double> pts = {0.0, 1.0, 3.0, spec.t_cutoff};
  const double ak = std::abs(k);
  if (p.omega1 > 1.0 && ak > 0.0) {
    const double ts = std::sqrt(p.omega1 * p.omega1 - 1.0) / ak;
    const double width = p.omega1 / (ak * ak * std::max(ts, 1e-300));
    for (double d : {4.0, 1.0}) {
      pts.push_back(ts - d * width);
      pts.push_back(ts + d * width);
    }
    pts.push_back(ts);
    pts.push_back(2.0 * ts);
  }
  std::erase_if(pts, [&](double t) { return t < 0.0 || t > spec.t_cutoff; });
  pts.push_back(0.0);
  pts.push_back(spec.t_cutoff);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace detail

/// L(k) = 1 - (1/sqrt(pi)) int_{-inf}^{inf} exp(-t^2) / (z0 + i k t) dt.
/// Even in k; L(0) = -i omega1 / z0.
inline Complex eval_L(double k, const ProblemParams& params,
                      const QuadratureSpec& quad = {}) {
  params.validate();
  quad.validate();
  if (!std::isfinite(k)) throw ConfigError("eval_L: k must be finite");
  const Complex z0 = params.z0();
  const Complex z0sq = z0 * z0;
  const double ksq = k * k;
  auto pts = detail::kernel_breakpoints(k, params, quad);
  Complex integral = integrate_adaptive(
      [&](double t) { return std::exp(-t * t) / (z0sq + ksq * t * t); }, pts, quad);
  return 1.0 - (2.0 * z0 / kSqrtPi) * integral;
}

/// T_n(k) = (1/sqrt(pi)) int exp(-t^2) t^n / (z0 + i k t) dt for n in {1, 2}.
/// T_1 is odd in k (T_1(0) = 0 exactly); T_2 is even.
inline Complex eval_T(int n, double k, const ProblemParams& params,
                      const QuadratureSpec& quad = {}) {
  params.validate();
  quad.validate();
  if (n != 1 && n != 2) throw ConfigError("eval_T: only n in {1, 2} is supported");
  if (!std::isfinite(k)) throw ConfigError("eval_T: k must be finite");
  const Complex z0 = params.z0();
  const Complex z0sq = z0 * z0;
  const double ksq = k * k;
  auto pts = detail::kernel_breakpoints(k, params, quad);
  // shared second moment: int_0^inf exp(-t^2) t^2 / (z0^2 + k^2 t^2) dt
  Complex m2 = integrate_adaptive(
      [&](double t) { return std::exp(-t * t) * t * t / (z0sq + ksq * t * t); }, pts, quad);
  if (n == 1) return Complex(0.0, -2.0 * k) / kSqrtPi * m2;
  return (2.0 * z0 / kSqrtPi) * m2;
}

/// |t|-moment companion of T_1: (1/sqrt(pi)) int exp(-t^2) |t| / (z0 + ikt) dt.
/// This is the source moment of the characteristic equation. Even in k;
/// value 1/(sqrt(pi) z0) at k = 0.
inline Complex eval_T1_abs(double k, const ProblemParams& params,
                           const QuadratureSpec& quad = {}) {
  params.validate();
  quad.validate();
  if (!std::isfinite(k)) throw ConfigError("eval_T1_abs: k must be finite");
  const Complex z0 = params.z0();
  const Complex z0sq = z0 * z0;
  const double ksq = k * k;
  auto pts = detail::kernel_breakpoints(k, params, quad);
  Complex m1 = integrate_adaptive(
      [&](double t) { return std::exp(-t * t) * t / (z0sq + ksq * t * t); }, pts, quad);
  return (2.0 * z0 / kSqrtPi) * m1;
}

/// J(k, k1) = (1/sqrt(pi)) int exp(-t^2) |t| / ((z0 + ikt)(z0 + i k1 t)) dt.
/// The second factor carries i*k1*t, which makes J symmetric, J(k,k1) =
/// J(k1,k), invariant under (k,k1) -> (-k,-k1), and J(k,0) = T1_abs(k)/z0.
inline Complex eval_J(double k, double k1, const ProblemParams& params,
                      const QuadratureSpec& quad = {}) {
  params.validate();
  quad.validate();
  if (!std::isfinite(k) || !std::isfinite(k1)) throw ConfigError("eval_J: k, k1 must be finite");
  const Complex z0 = params.z0();
  const Complex z0sq = z0 * z0;
  const double ksq = k * k, k1sq = k1 * k1, kk1 = k * k1;
  auto pts = detail::kernel_breakpoints(k, params, quad);
  auto pts1 = detail::kernel_breakpoints(k1, params, quad);
  pts.insert(pts.end(), pts1.begin(), pts1.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  Complex integral = integrate_adaptive(
      [&](double t) {
        const double tsq = t * t;
        return std::exp(-tsq) * t * (z0sq - kk1 * tsq) /
               ((z0sq + ksq * tsq) * (z0sq + k1sq * tsq));
      },
      pts, quad);
  return (2.0 / kSqrtPi) * integral;
}

/// Dispersion function lambda(z) = z0 + (z/sqrt(pi)) int exp(-t^2)/(t - z) dt
/// for Im z != 0. Related to L by L(k) = lambda(-z0/(ik)) / z0; tends to
/// z0 - 1 = -i omega1 as |z| -> inf.
inline Complex eval_lambda(Complex z, const ProblemParams& params,
                           const QuadratureSpec& quad = {}) {
  params.validate();
  quad.validate();
  if (z.imag() == 0.0)
    throw DomainError("eval_lambda: z lies on the real-line cut of the Cauchy integral");
  const double cut = quad.t_cutoff;
  std::vector<double> pts = {-cut, -3.0, -1.0, 0.0, 1.0, 3.0, cut};
  const double xr = z.real();
  const double width = std::abs(z.imag());
  if (std::abs(xr) < cut) {
    for (double d : {-8.0, -2.0, -1.0, 0.0, 1.0, 2.0, 8.0}) {
      double t = xr + d * width;
      if (t > -cut && t < cut) pts.push_back(t);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  Complex cauchy = integrate_adaptive(
      [&](double t) { return std::exp(-t * t) / (t - z); }, pts, quad);
  return params.z0() + z / kSqrtPi * cauchy;
}

/// The point z = -z0/(ik) at which lambda(z)/z0 reproduces L(k).
inline Complex dispersion_point(double k, const ProblemParams& params) {
  if (k == 0.0) throw DomainError("dispersion_point: k = 0 maps to infinity");
  return Complex(params.omega1, 1.0) / k;
}

}  // namespace stokes2
