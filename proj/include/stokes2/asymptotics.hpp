#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "stokes2/params.hpp"
#include "stokes2/quadrature.hpp"

namespace stokes2 {

/// High-frequency (omega1 >> 1) order-0 velocity amplitude, normalized by
/// the wall amplitude:
///   (q/sqrt(pi)) int_0^inf exp(-t^2 + i x omega1 / t) dt.
/// At x = 0 this gives exactly q/2, the wall-value law.
///
/// Numerics: above the crossover t* = sqrt(x omega1) the phase varies by at
/// most O(1) per unit t and plain adaptive panels suffice. Below t* the
/// panels are delimited by successive zeros of cos(x omega1 / t); their
/// contributions alternate, so the descent toward the essential singularity
/// at t = 0+ is truncated by iterated averaging of the alternating partial
/// sums, with the dropped (0, delta] neighborhood bounded by delta itself
/// (the integrand modulus is <= 1 there).
inline Complex hf_velocity(double x, double q, double omega1, double tol = 1e-8) {
  if (!std::isfinite(x) || x < 0.0) throw ConfigError("hf_velocity: x must be >= 0");
  if (!std::isfinite(omega1) || !(omega1 > 0.0)) throw ConfigError("hf_velocity: omega1 must be > 0");
  if (!std::isfinite(q) || q < 0.0 || q > 1.0) throw ConfigError("hf_velocity: q must lie in [0, 1]");
  if (!(tol > 0.0)) throw ConfigError("hf_velocity: tol must be > 0");

  const double c = x * omega1;
  QuadratureSpec spec;
  spec.rel_tol = std::min(1e-10, 0.1 * tol);
  spec.max_panels = 256;

  if (c == 0.0) {
    const double pts[] = {0.0, 1.0, 3.0, 7.5};
    Complex v = integrate_adaptive([](double t) { return Complex(std::exp(-t * t)); },
                                   std::span<const double>(pts, 4), spec);
    return q / kSqrtPi * v;
  }

  const double t_star = std::sqrt(c);
  const Complex i_unit(0.0, 1.0);
  auto f = [&](double t) { return std::exp(Complex(-t * t, 0.0) + i_unit * (c / t)); };

  // smooth region [t*, inf): phase rate c/t^2 <= 1
  const double upper_end = std::max(7.5, t_star + 7.5);
  std::vector<double> pts = {t_star, std::min(2.0 * t_star, upper_end), upper_end};
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  Complex upper = integrate_adaptive(f, pts, spec);

  // oscillatory descent: zeros of cos(c/t) at t_m = c / ((m + 1/2) pi)
  auto zero_at = [&](int m) { return c / ((m + 0.5) * kPi); };
  int m0 = 0;
  while (zero_at(m0) > t_star) ++m0;
  // partial panel from the first zero below t* up to t*
  Complex bridge = integrate_adaptive(f, zero_at(m0), t_star, spec);

  const GaussRule& rule = gauss_legendre(12);
  auto segment = [&](int m) {
    const double b = zero_at(m0 + m), a = zero_at(m0 + m + 1);
    const double cc = 0.5 * (a + b), h = 0.5 * (b - a);
    Complex s = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) s += rule.w[i] * f(cc + h * rule.x[i]);
    return h * s;
  };
  double tail_err = 0.0;
  Complex descent = alternating_sum(segment, 0.25 * tol, 200000, &tail_err);

  return q / kSqrtPi * (upper + bridge + descent);
}

enum class Figure { fig1, fig2 };

/// One normalized-velocity curve w(x) = Re[hf_velocity] at fixed (omega1, q).
struct FigureCurve {
  double omega1 = 0.0;
  double q = 0.0;
  std::vector<double> x;
  std::vector<double> w;
};

/// Datasets behind the two survey figures: fig1 varies the frequency
/// (omega1 = 5 and 6 at q = 1), fig2 varies the accommodation
/// (q = 1, 0.5, 0.2 at omega1 = 5). 201 points on x in [0, 4].
inline std::vector<FigureCurve> figure_data(Figure which, double tol = 1e-8) {
  std::vector<std::pair<double, double>> cases;  // (omega1, q)
  if (which == Figure::fig1) {
    cases = {{5.0, 1.0}, {6.0, 1.0}};
  } else {
    cases = {{5.0, 1.0}, {5.0, 0.5}, {5.0, 0.2}};
  }
  const int n = 201;
  std::vector<FigureCurve> out;
  for (auto [om, q] : cases) {
    FigureCurve c;
    c.omega1 = om;
    c.q = q;
    c.x.reserve(n);
    c.w.reserve(n);
    for (int i = 0; i < n; ++i) {
      const double x = 4.0 * i / (n - 1);
      c.x.push_back(x);
      c.w.push_back(hf_velocity(x, q, om, tol).real());
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace stokes2
