#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "stokes2/neumann.hpp"

namespace stokes2 {

struct InversionOptions {
  int dense_nodes_per_panel = 6;
  double min_nodes_per_period = 10.0;  // resolution contract for e^{ikx}
  double tail_rel_tol = 1e-8;
  bool use_tail = true;  // fitted |k| > k_max correction
  QuadratureSpec quad{};
};

/// Complex mass-velocity amplitude on an x-grid plus the normalized real
/// part w(x) = Re U(x) / u0 that the figures plot.
struct VelocityProfile {
  std::vector<double> x;
  std::vector<Complex> U;
  std::vector<double> w;
  double omega1 = 0.0;
  double q = 0.0;
  int orders = 0;
};

/// Distribution-function slice h(x, mu). `weights` carries Gauss-Hermite
/// weights when the slice was built on a Hermite grid (empty otherwise).
struct DistributionSlice {
  double x = 0.0;
  std::vector<double> mu;
  std::vector<Complex> h;
  std::vector<double> weights;
};

namespace detail {

/// Two-point algebraic tail model: fits E(k) ~ (c0 + c1 ln k) / k^2 from the
/// source-grid values at k_max and k_max/2. A plain C/k^2 fit leaves an
/// O(1/k_max) systematic in the x ~ 0 inversion; the log term removes it.
struct TailFit {
  Complex c0{0.0}, c1{0.0};

  static TailFit from(const KGrid& grid, std::span<const Complex> values) {
    const double K = grid.k_max();
    const Complex A = grid.interpolate(values, K) * K * K;
    const Complex B = grid.interpolate(values, 0.5 * K) * (0.25 * K * K);
    TailFit f;
    f.c1 = (A - B) / std::log(2.0);
    f.c0 = A - f.c1 * std::log(K);
    return f;
  }

  Complex model(double k) const { return (c0 + c1 * std::log(k)) / (k * k); }
};

/// GL8 over [a, b], split geometrically when the interval spans a large
/// ratio (the algebraic envelope is not polynomial-like over decades).
template <class F>
Complex half_period_panel(F&& g, double a, double b) {
  const GaussRule& rule = gauss_legendre(8);
  const int parts = std::clamp(static_cast<int>(std::ceil(std::log2(b / a))), 1, 16);
  Complex s = 0.0;
  double lo = a;
  const double r = std::pow(b / a, 1.0 / parts);
  for (int p = 0; p < parts; ++p) {
    const double hi = (p + 1 == parts) ? b : lo * r;
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < rule.x.size(); ++i) s += h * rule.w[i] * g(c + h * rule.x[i]);
    lo = hi;
  }
  return s;
}

/// int_K^inf cos(kx) (c0 + c1 ln k)/k^2 dk. Closed form at x = 0; for x > 0
/// half-period panels with iterated averaging of the alternating sums.
inline Complex tail_cos(const TailFit& f, double K, double x, double rel_tol) {
  if (x == 0.0) return (f.c0 + f.c1 * (std::log(K) + 1.0)) / K;
  const double h = kPi / x;
  auto segment = [&](int m) {
    const double a = K + m * h;
    return half_period_panel([&](double k) { return std::cos(k * x) * f.model(k); }, a, a + h);
  };
  const double scale = (std::abs(f.c0) + std::abs(f.c1) * std::log(K)) / K + 1e-300;
  return alternating_sum(segment, rel_tol * scale, 4096);
}

/// Tail of the slice integrand: int_K^inf (c0 + c1 ln k)/k^2 *
/// [2 z0 cos(kx) + 2 k mu sin(kx)] / (z0^2 + k^2 mu^2) dk (the +/-k pair sum
/// of e^{ikx} E(k)/(z0 + ik mu)).
inline Complex tail_slice(const TailFit& f, double K, double x, double mu, Complex z0,
                          double rel_tol, const QuadratureSpec& quad) {
  if (mu == 0.0) return (2.0 / z0) * tail_cos(f, K, x, rel_tol);
  const Complex z0sq = z0 * z0;
  auto pair_sum = [&](double k) {
    return f.model(k) * (2.0 * z0 * std::cos(k * x) + 2.0 * k * mu * std::sin(k * x)) /
           (z0sq + k * k * mu * mu);
  };
  if (x == 0.0) {
    std::vector<double> pts;
    for (double e = K; e <= 300.0 * K; e *= 2.0) pts.push_back(e);
    QuadratureSpec qs = quad;
    qs.max_panels = std::max(quad.max_panels, 64);
    return integrate_adaptive(pair_sum, pts, qs);
  }
  const double h = kPi / x;
  auto segment = [&](int m) {
    const double a = K + m * h;
    return half_period_panel(pair_sum, a, a + h);
  };
  const double scale =
      (std::abs(f.c0) + std::abs(f.c1) * std::log(K)) / K / std::abs(z0 + Complex(0, K * mu)) +
      1e-300;
  return alternating_sum(segment, rel_tol * scale, 4096);
}

}  // namespace detail

/// Inverse-Fourier machinery for one or more even spectra sampled on a
/// shared KGrid. Spectra are re-sampled onto a dense oscillation-resolving
/// grid by panel-wise barycentric interpolation (the spectra are smooth in
/// k; only e^{ikx} needs the density), and the |k| > k_max remainder is
/// restored by the fitted algebraic tail.
class SpectrumInverter {
 public:
  SpectrumInverter(KGridPtr source, std::vector<std::vector<Complex>> spectra, double x_max,
                   InversionOptions opts = {})
      : opts_(opts), source_(std::move(source)) {
    if (!source_) throw ConfigError("SpectrumInverter: null source grid");
    const double max_width = (x_max > 0.0) ? kPi / (4.0 * x_max)
                                           : std::numeric_limits<double>::infinity();
    const double est_nodes =
        2.0 * source_->k_max() / max_width * opts.dense_nodes_per_panel;
    if (est_nodes > 5e6)
      throw ConfigError(
          "SpectrumInverter: x_max * k_max implies over 5e6 oscillation nodes; "
          "reduce the x range or the spectral truncation");
    dense_ = std::make_shared<KGrid>(
        KGrid::build(source_->k_max(), opts.dense_nodes_per_panel, max_width));
    for (auto& s : spectra) {
      if (s.size() != source_->size())
        throw ConfigError("SpectrumInverter: spectrum size does not match the grid");
      tails_.push_back(detail::TailFit::from(*source_, s));
      std::vector<Complex> dv(dense_->size());
      for (std::size_t i = 0; i < dense_->size(); ++i)
        dv[i] = source_->interpolate(s, dense_->nodes()[i]);
      dense_values_.push_back(std::move(dv));
    }
  }

  std::size_t spectra_count() const { return dense_values_.size(); }
  const KGrid& dense_grid() const { return *dense_; }

  /// Fails unless the dense grid keeps at least min_nodes_per_period nodes
  /// per oscillation period of e^{ikx}.
  void check_resolution(double x) const {
    const double ax = std::abs(x);
    if (ax == 0.0) return;
    const double nodes_per_period =
        opts_.dense_nodes_per_panel * (2.0 * kPi / ax) / dense_->max_panel_width();
    if (nodes_per_period < opts_.min_nodes_per_period)
      throw ResolutionError(
          "inversion grid under-resolves e^{ikx} at x = " + std::to_string(x) + " (" +
          std::to_string(nodes_per_period) + " nodes per period; need >= " +
          std::to_string(opts_.min_nodes_per_period) + "); rebuild with larger x_max");
  }

  /// int e^{ikx} S_s(k) dk (quadrature over the dense grid plus tail).
  Complex invert(std::size_t s, double x) const {
    check_resolution(x);
    const auto& v = dense_values_[s];
    Complex acc = 0.0;
    for (std::size_t i = 0; i < dense_->size(); ++i) {
      const double ph = dense_->nodes()[i] * x;
      acc += dense_->weights()[i] * Complex(std::cos(ph), std::sin(ph)) * v[i];
    }
    if (!opts_.use_tail) return acc;
    return acc + 2.0 * detail::tail_cos(tails_[s], source_->k_max(), std::abs(x),
                                        opts_.tail_rel_tol);
  }

  /// All spectra at once (shares the trig work across orders).
  std::vector<Complex> invert_all(double x) const {
    check_resolution(x);
    std::vector<Complex> out(spectra_count(), Complex(0.0));
    for (std::size_t i = 0; i < dense_->size(); ++i) {
      const double ph = dense_->nodes()[i] * x;
      const Complex cis(std::cos(ph), std::sin(ph));
      const Complex wc = dense_->weights()[i] * cis;
      for (std::size_t s = 0; s < out.size(); ++s) out[s] += wc * dense_values_[s][i];
    }
    if (opts_.use_tail)
      for (std::size_t s = 0; s < out.size(); ++s)
        out[s] += 2.0 * detail::tail_cos(tails_[s], source_->k_max(), std::abs(x),
                                         opts_.tail_rel_tol);
    return out;
  }

  /// int e^{ikx} S_s(k) / (z0 + ik mu) dk.
  Complex invert_slice(std::size_t s, double x, double mu, Complex z0) const {
    check_resolution(x);
    const auto& v = dense_values_[s];
    Complex acc = 0.0;
    for (std::size_t i = 0; i < dense_->size(); ++i) {
      const double k = dense_->nodes()[i];
      const double ph = k * x;
      acc += dense_->weights()[i] * Complex(std::cos(ph), std::sin(ph)) * v[i] /
             (z0 + Complex(0.0, k * mu));
    }
    if (!opts_.use_tail) return acc;
    return acc + detail::tail_slice(tails_[s], source_->k_max(), x, mu, z0,
                                    opts_.tail_rel_tol, opts_.quad);
  }

 private:
  InversionOptions opts_;
  KGridPtr source_;
  KGridPtr dense_;
  std::vector<std::vector<Complex>> dense_values_;
  std::vector<detail::TailFit> tails_;
};

/// Order-aware inverter for a built Neumann series: mass-velocity terms
/// U_n(x) = (1/2pi) int e^{ikx} E_n(k) dk, their q-resummation, and
/// distribution slices h(x, mu).
class FourierInverter {
 public:
  FourierInverter(SeriesSolution series, double x_max, InversionOptions opts = {})
      : series_(std::move(series)), opts_(opts),
        inv_(series_.grid, collect(series_), x_max, opts) {}

  const SeriesSolution& series() const { return series_; }

  Complex velocity_term(int n, double x) const {
    require_order(n);
    return inv_.invert(static_cast<std::size_t>(n), x) / (2.0 * kPi);
  }

  /// U_n(x) for all built orders at once.
  std::vector<Complex> velocity_terms(double x) const {
    auto raw = inv_.invert_all(x);
    for (auto& v : raw) v /= 2.0 * kPi;
    return raw;
  }

  /// q u0 [U_0 + q U_1 + ...] resummed through order N (N < 0: all built).
  Complex total_velocity_at(double x, int N = -1) const {
    const auto terms = velocity_terms(x);
    const std::size_t top = (N < 0) ? terms.size() - 1
                                    : std::min<std::size_t>(N, terms.size() - 1);
    Complex s = 0.0;
    double qn = 1.0;
    for (std::size_t n = 0; n <= top; ++n) {
      s += qn * terms[n];
      qn *= series_.params.q;
    }
    return series_.params.q * series_.params.u0 * s;
  }

  /// h(x, mu) = q u0 sum_n q^n h_n(x, mu). The bounded part of each
  /// h_n = (1/pi) int e^{ikx} Phi_n dk is integrated on the dense grid; the
  /// |mu|-source part of Phi_n carries a simple pole in k and is restored in
  /// closed form from its residue, e^{-x z0 / mu} for mu > 0 (this is the
  /// ballistic wall term; it vanishes for mu < 0 in the half-space x > 0).
  /// The moment g_{n-1}(mu) in the wall coefficient is taken through the
  /// same dense quadrature as the bounded part, which keeps the boundary
  /// condition h(0,mu) - (1-q) h(0,-mu) = 2 q u0 satisfied to the series
  /// truncation error rather than to a discretization floor.
  Complex distribution_at(double x, double mu, int N = -1) const {
    if (x < 0.0) throw ConfigError("distribution_at: x must be >= 0");
    const ProblemParams& p = series_.params;
    const Complex z0 = p.z0();
    const int top = (N < 0) ? series_.truncation_order : std::min(N, series_.truncation_order);
    Complex s = 0.0;
    double qn = 1.0;
    for (int n = 0; n <= top; ++n) {
      Complex hn = inv_.invert_slice(static_cast<std::size_t>(n), x, mu, z0) / kPi;
      if (mu > 0.0) {
        const Complex jump =
            (n == 0) ? Complex(1.0)
                     : -inv_.invert_slice(static_cast<std::size_t>(n) - 1, 0.0, mu, z0) /
                           (2.0 * kPi);
        hn += 2.0 * jump * std::exp(-x * z0 / mu);
      }
      s += qn * hn;
      qn *= p.q;
    }
    return p.q * p.u0 * s;
  }

 private:
  static std::vector<std::vector<Complex>> collect(const SeriesSolution& s) {
    std::vector<std::vector<Complex>> out;
    out.reserve(s.terms.size());
    for (const auto& t : s.terms) out.push_back(t.values);
    return out;
  }
  void require_order(int n) const {
    if (n < 0 || n > series_.truncation_order)
      throw ConfigError("velocity_term: order outside the built series");
  }

  SeriesSolution series_;
  InversionOptions opts_;
  SpectrumInverter inv_;
};

/// U_n on an x-grid.
inline std::vector<Complex> velocity_term(int n, const SeriesSolution& series,
                                          std::span<const double> x_grid,
                                          InversionOptions opts = {}) {
  double x_max = 0.0;
  for (double x : x_grid) x_max = std::max(x_max, std::abs(x));
  FourierInverter inv(series, x_max, opts);
  std::vector<Complex> out;
  out.reserve(x_grid.size());
  for (double x : x_grid) out.push_back(inv.velocity_term(n, x));
  return out;
}

/// Resummed velocity profile U(x) = q u0 sum_n q^n U_n(x), w = Re U / u0.
inline VelocityProfile total_velocity(const SeriesSolution& series,
                                      std::span<const double> x_grid,
                                      InversionOptions opts = {}) {
  double x_max = 0.0;
  for (double x : x_grid) x_max = std::max(x_max, std::abs(x));
  FourierInverter inv(series, x_max, opts);
  VelocityProfile prof;
  prof.omega1 = series.params.omega1;
  prof.q = series.params.q;
  prof.orders = series.truncation_order;
  prof.x.assign(x_grid.begin(), x_grid.end());
  prof.U.reserve(x_grid.size());
  prof.w.reserve(x_grid.size());
  for (double x : x_grid) {
    const Complex u = inv.total_velocity_at(x);
    prof.U.push_back(u);
    prof.w.push_back(u.real() / series.params.u0);
  }
  return prof;
}

/// Distribution slice at explicit mu values.
inline DistributionSlice distribution_slice(const SeriesSolution& series, double x,
                                            std::span<const double> mu_grid,
                                            InversionOptions opts = {}) {
  FourierInverter inv(series, x, opts);
  DistributionSlice slice;
  slice.x = x;
  slice.mu.assign(mu_grid.begin(), mu_grid.end());
  slice.h.reserve(mu_grid.size());
  for (double mu : mu_grid) slice.h.push_back(inv.distribution_at(x, mu));
  return slice;
}

/// Maxwellian-weighted mu-rule that integrates slice moments to near
/// machine accuracy: panel-wise Gauss-Legendre with the exp(-mu^2) weight
/// absorbed, graded geometrically toward mu = 0 on both sides, plus
/// 1/mu-spaced shells on the positive side that track the phase of the
/// oscillating, exponentially damped wall factor e^{-x z0 / mu}. (A plain
/// Gauss-Hermite rule stalls near 1e-3 on that factor: it is smooth but not
/// analytic at mu = 0+.)
inline GaussRule moment_mu_rule(double x, double omega1, double mu_cut = 8.5) {
  if (x < 0.0) throw ConfigError("moment_mu_rule: x must be >= 0");
  std::vector<double> pos = {mu_cut, 6.0, 4.0, 3.0, 2.0, 1.5, 1.0};
  for (double e = 0.5; e > 2e-3; e *= 0.5) pos.push_back(e);
  pos.push_back(0.0);
  const double c = x * omega1;
  if (c > 0.0) {
    const double mu_floor = x / 42.0;  // wall factor below e^{-42} there
    for (double phi = c + kPi; c / phi > mu_floor; phi += kPi) pos.push_back(c / phi);
  }
  std::sort(pos.begin(), pos.end());
  pos.erase(std::unique(pos.begin(), pos.end()), pos.end());

  std::vector<double> edges;  // negative side: no wall term, geometric grading only
  for (double e : {-mu_cut, -6.0, -4.0, -3.0, -2.0, -1.5, -1.0}) edges.push_back(e);
  for (double e = -0.5; e < -2e-3; e *= 0.5) edges.push_back(e);
  edges.insert(edges.end(), pos.begin(), pos.end());
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  const GaussRule& gl = gauss_legendre(12);
  GaussRule rule;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p], b = edges[p + 1];
    const double cc = 0.5 * (a + b), h = 0.5 * (b - a);
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      const double mu = cc + h * gl.x[i];
      rule.x.push_back(mu);
      rule.w.push_back(h * gl.w[i] * std::exp(-mu * mu));
    }
  }
  return rule;
}

/// Distribution slice on the moment-accurate mu-rule of moment_mu_rule,
/// with weights stored for moment_velocity.
inline DistributionSlice distribution_slice_moment(const SeriesSolution& series, double x,
                                                   InversionOptions opts = {}) {
  GaussRule rule = moment_mu_rule(x, series.params.omega1);
  FourierInverter inv(series, x, opts);
  DistributionSlice slice;
  slice.x = x;
  slice.mu = rule.x;
  slice.weights = rule.w;
  slice.h.reserve(rule.x.size());
  for (double mu : rule.x) slice.h.push_back(inv.distribution_at(x, mu));
  return slice;
}

/// Distribution slice on an n-point Gauss-Hermite mu-grid, with the weights
/// stored so the velocity moment can be re-taken from the slice. For small
/// x the wall factor defeats Hermite quadrature; use
/// distribution_slice_moment when the moment itself is the target.
inline DistributionSlice distribution_slice_hermite(const SeriesSolution& series, double x,
                                                    int n_mu, InversionOptions opts = {}) {
  GaussRule rule = gauss_hermite(n_mu);
  FourierInverter inv(series, x, opts);
  DistributionSlice slice;
  slice.x = x;
  slice.mu = rule.x;
  slice.weights = rule.w;
  slice.h.reserve(rule.x.size());
  for (double mu : rule.x) slice.h.push_back(inv.distribution_at(x, mu));
  return slice;
}

/// U(x) recovered from a Hermite slice via the velocity moment
/// (1/(2 sqrt(pi))) int exp(-mu^2) h(x, mu) dmu.
inline Complex moment_velocity(const DistributionSlice& slice) {
  if (slice.weights.empty())
    throw ConfigError("moment_velocity: slice carries no quadrature weights");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < slice.mu.size(); ++i) acc += slice.weights[i] * slice.h[i];
  return acc / (2.0 * kSqrtPi);
}

/// Numeric vs closed-form check of the contour integral
/// (1/2pi i) int e^{ikx} / (z0 + ikt) dk = e^{-x z0 / t}/(i t) for t > 0 and
/// 0 for t < 0 (x > 0). The numeric route integrates along the damped V
/// contour k = s e^{i theta} (right ray) and k = -s e^{-i theta} (left ray),
/// with theta below the pole direction so no residue is crossed; at x = 0
/// it falls back to the symmetric-limit principal value, which is the mean
/// of the two one-sided x -> 0 limits.
inline std::pair<Complex, Complex> residue_check(double t, double x,
                                                 const ProblemParams& params,
                                                 const QuadratureSpec& quad = {}) {
  params.validate();
  quad.validate();
  if (t == 0.0) throw ConfigError("residue_check: t must be nonzero");
  if (x < 0.0) throw ConfigError("residue_check: x must be >= 0");
  const Complex z0 = params.z0();
  const Complex i_unit(0.0, 1.0);
  const Complex closed = (t > 0.0) ? std::exp(-x * z0 / t) / (i_unit * t) : Complex(0.0);

  Complex numeric;
  if (x == 0.0) {
    // pair-summed PV: (1/2pi i) int_0^K 2 z0 / (z0^2 + k^2 t^2) dk + remainder
    const Complex z0sq = z0 * z0;
    const double K = 1e5 * std::max(1.0, std::abs(z0) / std::abs(t));
    std::vector<double> pts = {0.0};
    for (double e = 1.0; e < K; e *= 4.0) pts.push_back(e);
    pts.push_back(K);
    QuadratureSpec qs = quad;
    qs.max_panels = std::max(quad.max_panels, 128);
    Complex I = integrate_adaptive(
        [&](double k) { return 2.0 * z0 / (z0sq + k * k * t * t); }, pts, qs);
    I += 2.0 * z0 / (t * t * K);  // 1/k^2 remainder
    numeric = I / (2.0 * kPi * i_unit);
  } else {
    const double theta = 0.5 * std::atan2(1.0, params.omega1);
    const Complex er = std::polar(1.0, theta);
    const Complex el = std::polar(1.0, -theta);
    auto f = [&](Complex k) { return std::exp(i_unit * k * x) / (z0 + i_unit * k * t); };
    const double S = 50.0 / (x * std::sin(theta));
    std::vector<double> pts = {0.0};
    const double kp = std::abs(Complex(params.omega1, 1.0) / t);
    for (double e : {0.25 * kp, kp, 4.0 * kp}) pts.push_back(e);
    for (double e = 1.0; e < S; e *= 4.0) pts.push_back(e);
    pts.push_back(S);
    std::erase_if(pts, [&](double s) { return s > S; });
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    QuadratureSpec qs = quad;
    qs.max_panels = std::max(quad.max_panels, 128);
    Complex I = integrate_adaptive(
        [&](double s) { return f(s * er) * er + f(-s * el) * el; }, pts, qs);
    numeric = I / (2.0 * kPi * i_unit);
  }
  return {numeric, closed};
}

}  // namespace stokes2
