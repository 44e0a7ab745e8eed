#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <mutex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "stokes2/errors.hpp"
#include "stokes2/params.hpp"

namespace stokes2 {

/// Nodes and weights of an n-point Gauss rule, plus barycentric weights for
/// interpolation through the same nodes.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
  std::vector<double> bary;
};

namespace detail {

inline GaussRule make_gauss_legendre(int n) {
  GaussRule rule;
  rule.x.assign(n, 0.0);
  rule.w.assign(n, 0.0);
  // Newton iteration on P_n with the Tricomi-style initial guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.x[i] = -x;
    rule.x[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.x[n / 2] = 0.0;
  // Barycentric weights for Gauss-Legendre nodes: (-1)^i sqrt((1-x_i^2) w_i).
  rule.bary.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double b = std::sqrt((1.0 - rule.x[i] * rule.x[i]) * rule.w[i]);
    rule.bary[i] = (i % 2 == 0) ? b : -b;
  }
  return rule;
}

}  // namespace detail

/// Cached n-point Gauss-Legendre rule on [-1, 1].
inline const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw ConfigError("Gauss-Legendre order must be >= 1");
  static std::mutex mtx;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, detail::make_gauss_legendre(n)).first;
  return it->second;
}

/// n-point Gauss-Hermite rule: sum_i w_i f(x_i) ~ int exp(-x^2) f(x) dx.
/// Golub-Welsch on the symmetric Jacobi matrix.
inline GaussRule gauss_hermite(int n) {
  if (n < 1) throw ConfigError("Gauss-Hermite order must be >= 1");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j < n; ++j) {
    double b = std::sqrt(0.5 * j);
    jac(j, j - 1) = b;
    jac(j - 1, j) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.x[i] = es.eigenvalues()(i);
    double v0 = es.eigenvectors()(0, i);
    rule.w[i] = kSqrtPi * v0 * v0;
  }
  // Symmetrize the +/- pairs exactly.
  for (int i = 0; i < n / 2; ++i) {
    int j = n - 1 - i;
    double x = 0.5 * (rule.x[j] - rule.x[i]);
    double w = 0.5 * (rule.w[i] + rule.w[j]);
    rule.x[i] = -x;
    rule.x[j] = x;
    rule.w[i] = rule.w[j] = w;
  }
  if (n % 2 == 1) rule.x[n / 2] = 0.0;
  return rule;
}

namespace detail {

struct Panel {
  double a, b;
  Complex value;  // two-half estimate
  double err;     // |two-half - one-shot|
};

template <class F>
Complex panel_sum(F&& f, double a, double b, const GaussRule& rule) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Complex s = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) s += rule.w[i] * f(c + h * rule.x[i]);
  return h * s;
}

template <class F>
Panel make_panel(F&& f, double a, double b, Complex coarse, const GaussRule& rule) {
  const double m = 0.5 * (a + b);
  Complex left = panel_sum(f, a, m, rule);
  Complex right = panel_sum(f, m, b, rule);
  return Panel{a, b, left + right, std::abs(left + right - coarse)};
}

}  // namespace detail

/// Adaptive panel-bisection Gauss-Legendre quadrature of a complex-valued
/// integrand over the union of [pts[0],pts[1]], ..., [pts[m-1],pts[m]].
/// Panels are split worst-first until the summed error estimate falls below
/// spec.rel_tol relative to the result (with a floor tied to the panel
/// magnitudes so cancelling integrands terminate). Throws ToleranceError on
/// budget exhaustion.
template <class F>
Complex integrate_adaptive(F&& f, std::span<const double> pts, const QuadratureSpec& spec,
                           double* err_out = nullptr) {
  if (pts.size() < 2) throw ConfigError("integrate_adaptive needs at least one interval");
  const GaussRule& rule = gauss_legendre(spec.nodes_per_panel);

  std::vector<detail::Panel> panels;
  panels.reserve(static_cast<std::size_t>(spec.max_panels) + pts.size());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!(pts[i] < pts[i + 1])) continue;  // skip empty/degenerate segments
    Complex coarse = detail::panel_sum(f, pts[i], pts[i + 1], rule);
    panels.push_back(detail::make_panel(f, pts[i], pts[i + 1], coarse, rule));
  }
  if (panels.empty()) return 0.0;

  auto converged = [&](double& errsum, Complex& total) {
    total = 0.0;
    errsum = 0.0;
    double magsum = 0.0;
    for (const auto& p : panels) {
      total += p.value;
      errsum += p.err;
      magsum += std::abs(p.value);
    }
    double scale = std::max(std::abs(total), 1e-3 * magsum);
    return errsum <= spec.rel_tol * scale;
  };

  Complex total = 0.0;
  double errsum = 0.0;
  while (!converged(errsum, total)) {
    if (static_cast<int>(panels.size()) >= spec.max_panels) {
      if (err_out) *err_out = errsum;
      throw ToleranceError("adaptive quadrature did not converge within the panel budget",
                           errsum / std::max(std::abs(total), 1e-300));
    }
    auto worst = std::max_element(panels.begin(), panels.end(),
                                  [](const auto& l, const auto& r) { return l.err < r.err; });
    detail::Panel p = *worst;
    panels.erase(worst);
    const double m = 0.5 * (p.a + p.b);
    // children inherit the parent's half-values as their one-shot estimates
    Complex cl = detail::panel_sum(f, p.a, m, rule);
    Complex cr = detail::panel_sum(f, m, p.b, rule);
    panels.push_back(detail::make_panel(f, p.a, m, cl, rule));
    panels.push_back(detail::make_panel(f, m, p.b, cr, rule));
  }
  if (err_out) *err_out = errsum;
  return total;
}

template <class F>
Complex integrate_adaptive(F&& f, double a, double b, const QuadratureSpec& spec,
                           double* err_out = nullptr) {
  const double pts[2] = {a, b};
  return integrate_adaptive(f, std::span<const double>(pts, 2), spec, err_out);
}

/// Sum of an alternating sequence of interval integrals I_0, I_1, ... with
/// slowly varying magnitude, accelerated by iterated averaging of the
/// partial sums (Euler transform). `segment(m)` returns I_m. Terminates once
/// the averaging stabilizes below abs_tol or max_segments is hit; the best
/// estimate is returned either way and *err_out reports the spread.
template <class F>
Complex alternating_sum(F&& segment, double abs_tol, int max_segments = 512,
                        double* err_out = nullptr) {
  std::vector<Complex> partial;  // raw partial sums
  partial.reserve(64);
  Complex s = 0.0;
  Complex best = 0.0, prev_best = 0.0;
  bool have_prev = false;
  double err = std::numeric_limits<double>::infinity();
  for (int m = 0; m < max_segments; ++m) {
    s += segment(m);
    partial.push_back(s);
    if (partial.size() < 4) continue;
    // collapse the averaging triangle over the most recent window
    const std::size_t win = std::min<std::size_t>(partial.size(), 32);
    std::vector<Complex> col(partial.end() - win, partial.end());
    while (col.size() > 1) {
      for (std::size_t i = 0; i + 1 < col.size(); ++i) col[i] = 0.5 * (col[i] + col[i + 1]);
      col.pop_back();
    }
    best = col[0];
    if (have_prev) {
      err = std::abs(best - prev_best);
      if (err <= abs_tol) break;
    }
    prev_best = best;
    have_prev = true;
  }
  if (err_out) *err_out = err;
  return best;
}

}  // namespace stokes2
