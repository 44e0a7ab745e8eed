#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "stokes2/grid.hpp"
#include "stokes2/kernels.hpp"

namespace stokes2 {

/// A complex spectral density sampled on a symmetric wavenumber grid.
struct SpectralDensity {
  KGridPtr grid;
  std::vector<Complex> values;
  int order_index = 0;

  double sup_norm() const {
    double m = 0.0;
    for (const Complex& v : values) m = std::max(m, std::abs(v));
    return m;
  }

  /// Grid-independent sup-norm: sampled by interpolation on a fixed set of
  /// probe points, so norms of the same density on refined grids agree.
  double probe_norm(int probes = 512) const {
    double m = 0.0;
    for (int j = 0; j <= probes; ++j)
      m = std::max(m, std::abs(grid->interpolate(values, grid->k_max() * j / probes)));
    return m;
  }
};

struct SeriesOptions {
  int max_order = 8;
  double k_max = 40.0;
  int nodes_per_panel = 16;
  double series_tol = 1e-6;   // stop once q^n ||E_n|| <= series_tol ||E_0||
  double tail_tol = 5e-2;     // require |E_0(k_max)| <= tail_tol max|E_0|;
                              // the fitted algebraic tail covers the remainder
  bool verify_grid = false;   // doubling self-check on E_0 (costs a second grid)
  double grid_tol = 1e-6;
  QuadratureSpec quad{};
};

/// The Neumann terms E_0..E_N of the spectral density together with
/// convergence metadata. The physical density resums as
/// E(k) = 2 u0 q [E_0 + q E_1 + q^2 E_2 + ...]; the terms themselves do not
/// depend on q.
struct SeriesSolution {
  ProblemParams params;
  KGridPtr grid;
  std::vector<SpectralDensity> terms;
  std::vector<double> term_norms;
  int truncation_order = 0;
  std::vector<double> ratio_history;  // term_norms[n+1] / term_norms[n]
  double decay_ratio = 0.0;
  bool converged = false;   // series_tol criterion met before max_order
  bool diverging = false;   // norms failed to decay past order 5

  /// Resummed spectral density 2 u0 q sum_n q^n E_n at grid node i, through
  /// order N (N < 0: all built orders).
  Complex total_at(std::size_t i, int N = -1) const {
    const int top = (N < 0) ? truncation_order : std::min(N, truncation_order);
    Complex s = 0.0;
    double qn = 1.0;
    for (int n = 0; n <= top; ++n) {
      s += qn * terms[n].values[i];
      qn *= params.q;
    }
    return 2.0 * params.u0 * params.q * s;
  }
};

/// Discretization of the characteristic-equation operator on a fixed grid:
/// caches L and the |t|-source moment at the nodes and, on demand, the full
/// J matrix (filled through its symmetry J(k,k1)=J(k1,k) and parity
/// J(-k,-k1)=J(k,k1)).
class FredholmOperator {
 public:
  FredholmOperator(const ProblemParams& params, KGridPtr grid, const QuadratureSpec& quad,
                   bool need_J)
      : params_(params), grid_(std::move(grid)), quad_(quad) {
    params_.validate();
    quad_.validate();
    const std::size_t m = grid_->size();
    L_.resize(m);
    T1abs_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      L_[i] = eval_L(grid_->nodes()[i], params_, quad_);
      T1abs_[i] = eval_T1_abs(grid_->nodes()[i], params_, quad_);
    }
    if (need_J) fill_J();
  }

  const ProblemParams& params() const { return params_; }
  const KGridPtr& grid() const { return grid_; }
  const std::vector<Complex>& L() const { return L_; }
  const std::vector<Complex>& T1abs() const { return T1abs_; }
  bool has_J() const { return !J_.empty(); }
  Complex J(std::size_t i, std::size_t j) const { return J_[i * grid_->size() + j]; }

  /// E_0(k_i) = T1_abs(k_i) / L(k_i). Throws DegeneracyError when |L| is
  /// numerically zero (omega1 effectively zero).
  SpectralDensity zeroth() const {
    SpectralDensity e0;
    e0.grid = grid_;
    e0.order_index = 0;
    e0.values.resize(grid_->size());
    for (std::size_t i = 0; i < grid_->size(); ++i) {
      if (std::abs(L_[i]) < 1e-12)
        throw DegeneracyError("zeroth_term: |L(k)| < 1e-12, omega1 too close to 0",
                              grid_->nodes()[i]);
      e0.values[i] = T1abs_[i] / L_[i];
    }
    return e0;
  }

  /// E_n(k_i) = -(1/(2 pi L(k_i))) sum_j w_j J(k_i, k_j) E_{n-1}(k_j).
  SpectralDensity next(const SpectralDensity& prev) const {
    if (!has_J()) throw ConfigError("FredholmOperator: J matrix was not built");
    if (prev.grid != grid_) throw ConfigError("next: spectral density lives on another grid");
    const std::size_t m = grid_->size();
    SpectralDensity out;
    out.grid = grid_;
    out.order_index = prev.order_index + 1;
    out.values.resize(m);
    const auto& w = grid_->weights();
    for (std::size_t i = 0; i < m; ++i) {
      Complex acc = 0.0;
      const Complex* row = &J_[i * m];
      for (std::size_t j = 0; j < m; ++j) acc += w[j] * row[j] * prev.values[j];
      out.values[i] = -acc / (2.0 * kPi * L_[i]);
    }
    return out;
  }

  /// Off-grid continuation of the recursion: evaluates a fresh J row at k.
  Complex next_at(double k, const SpectralDensity& prev) const {
    return continue_recursion(k, prev, params_, quad_);
  }

  /// -(1/(2 pi L(k))) int J(k, k1) E(k1) dk1 on E's own grid, for any k.
  static Complex continue_recursion(double k, const SpectralDensity& prev,
                                    const ProblemParams& params, const QuadratureSpec& quad) {
    Complex acc = 0.0;
    const auto& g = *prev.grid;
    for (std::size_t j = 0; j < g.size(); ++j)
      acc += g.weights()[j] * eval_J(k, g.nodes()[j], params, quad) * prev.values[j];
    return -acc / (2.0 * kPi * eval_L(k, params, quad));
  }

 private:
  void fill_J() {
    const std::size_t m = grid_->size();
    J_.assign(m * m, Complex(0.0));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i; j < m; ++j) {
        const std::size_t mi = grid_->mirror_index(i);
        const std::size_t mj = grid_->mirror_index(j);
        // canonical representative under parity already computed?
        const std::size_t a = std::min(mi, mj), b = std::max(mi, mj);
        if (a < i || (a == i && b < j)) {
          J_[i * m + j] = J_[a * m + b];
        } else {
          J_[i * m + j] =
              eval_J(grid_->nodes()[i], grid_->nodes()[j], params_, quad_);
        }
        J_[j * m + i] = J_[i * m + j];
      }
    }
  }

  ProblemParams params_;
  KGridPtr grid_;
  QuadratureSpec quad_;
  std::vector<Complex> L_, T1abs_;
  std::vector<Complex> J_;
};

/// E_0 on a caller-provided grid.
inline SpectralDensity zeroth_term(const ProblemParams& params, KGridPtr grid,
                                   const QuadratureSpec& quad = {}) {
  return FredholmOperator(params, std::move(grid), quad, /*need_J=*/false).zeroth();
}

/// One Neumann step on the grid of `prev`. Builds the kernel rows on the
/// fly; use build_series / FredholmOperator for repeated application.
inline SpectralDensity next_term(const SpectralDensity& prev, const ProblemParams& params,
                                 const QuadratureSpec& quad = {}) {
  params.validate();
  quad.validate();
  if (!prev.grid) throw ConfigError("next_term: spectral density has no grid");
  const std::size_t m = prev.grid->size();
  SpectralDensity out;
  out.grid = prev.grid;
  out.order_index = prev.order_index + 1;
  out.values.resize(m);
  const auto& nodes = prev.grid->nodes();
  const auto& w = prev.grid->weights();
  for (std::size_t i = 0; i < m; ++i) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      acc += w[j] * eval_J(nodes[i], nodes[j], params, quad) * prev.values[j];
    out.values[i] = -acc / (2.0 * kPi * eval_L(nodes[i], params, quad));
  }
  return out;
}

/// Relative change of E_0 when the grid density is doubled; used as the
/// grid-convergence probe behind SeriesOptions::verify_grid.
inline double grid_self_error(const ProblemParams& params, const SeriesOptions& opts) {
  auto coarse = KGrid::build(opts.k_max, opts.nodes_per_panel);
  auto fine = KGrid::build(opts.k_max, 2 * opts.nodes_per_panel);
  auto e0c = zeroth_term(params, std::make_shared<KGrid>(coarse), opts.quad);
  auto e0f = zeroth_term(params, std::make_shared<KGrid>(fine), opts.quad);
  double sup = 0.0, scale = e0f.sup_norm();
  for (std::size_t i = 0; i < fine.size(); ++i) {
    Complex interp = coarse.interpolate(e0c.values, fine.nodes()[i]);
    sup = std::max(sup, std::abs(interp - e0f.values[i]));
  }
  return sup / std::max(scale, 1e-300);
}

/// Builds the Neumann series E_0..E_N with truncation control by relative
/// sup-norm: stops at the first order with q^n ||E_n|| <= series_tol ||E_0||.
/// Non-decaying norms past order 5 set the `diverging` flag (the terms and
/// ratio history are still returned).
inline SeriesSolution build_series(const ProblemParams& params, const SeriesOptions& opts = {}) {
  params.validate();
  opts.quad.validate();
  if (opts.max_order < 0) throw ConfigError("build_series: max_order must be >= 0");
  if (!(opts.series_tol > 0.0)) throw ConfigError("build_series: series_tol must be > 0");

  SeriesSolution sol;
  sol.params = params;
  sol.grid = std::make_shared<KGrid>(KGrid::build(opts.k_max, opts.nodes_per_panel));

  FredholmOperator op(params, sol.grid, opts.quad, /*need_J=*/opts.max_order >= 1);
  sol.terms.push_back(op.zeroth());
  sol.term_norms.push_back(sol.terms[0].probe_norm());

  // k_max must capture the decay of E_0
  const double edge = std::abs(sol.terms[0].values.back());
  if (edge > opts.tail_tol * sol.term_norms[0])
    throw ResolutionError("build_series: |E_0(k_max)| exceeds tail_tol * max|E_0|; raise k_max");

  if (opts.verify_grid) {
    const double err = grid_self_error(params, opts);
    if (err > opts.grid_tol)
      throw ResolutionError("build_series: doubling the grid changes E_0 by " +
                            std::to_string(err) + " > grid_tol");
  }

  sol.truncation_order = 0;
  sol.converged = (opts.max_order == 0);
  for (int n = 1; n <= opts.max_order; ++n) {
    sol.terms.push_back(op.next(sol.terms.back()));
    sol.term_norms.push_back(sol.terms.back().probe_norm());
    sol.truncation_order = n;
    sol.ratio_history.push_back(sol.term_norms[n] / std::max(sol.term_norms[n - 1], 1e-300));
    sol.decay_ratio = sol.ratio_history.back();
    if (n >= 5 && sol.decay_ratio >= 1.0) sol.diverging = true;
    const double weight = std::pow(params.q, n);
    if (weight * sol.term_norms[n] <= opts.series_tol * sol.term_norms[0]) {
      sol.converged = true;
      break;
    }
  }
  return sol;
}

/// (1/2pi) int E_n(k1) / (z0 + i k1 mu) dk1 on the series grid: the
/// mu-moment that feeds both Phi_{n+1} and the distribution reconstruction.
inline Complex spectral_moment(const SeriesSolution& series, int n, double mu) {
  if (n < 0 || n > series.truncation_order)
    throw ConfigError("spectral_moment: order outside the built series");
  const Complex z0 = series.params.z0();
  const auto& g = *series.grid;
  Complex acc = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    acc += g.weights()[j] * series.terms[n].values[j] / (z0 + Complex(0.0, g.nodes()[j] * mu));
  return acc / (2.0 * kPi);
}

/// Phi_n(k, mu): the order-n spectral density of the distribution function.
/// Phi_0 = (E_0(k) + |mu|) / (z0 + ik mu); for n >= 1,
/// Phi_n = [E_n(k) - |mu| (1/2pi) int E_{n-1}(k1)/(z0 + i k1 mu) dk1] / (z0 + ik mu).
/// k need not be a grid node; off-grid values use the recursion itself.
inline Complex phi_term(int n, const SeriesSolution& series, double k, double mu,
                        const QuadratureSpec& quad = {}) {
  if (n < 0 || n > series.truncation_order)
    throw ConfigError("phi_term: order outside the built series");
  if (!std::isfinite(k) || !std::isfinite(mu)) throw ConfigError("phi_term: k, mu must be finite");
  const ProblemParams& p = series.params;
  const Complex z0 = p.z0();
  const Complex denom = z0 + Complex(0.0, k * mu);
  if (n == 0) {
    const Complex e0 = eval_T1_abs(k, p, quad) / eval_L(k, p, quad);
    return (e0 + std::abs(mu)) / denom;
  }
  const Complex en = FredholmOperator::continue_recursion(
      k, series.terms[static_cast<std::size_t>(n) - 1], p, quad);
  const Complex g = spectral_moment(series, n - 1, mu);
  return (en - std::abs(mu) * g) / denom;
}

}  // namespace stokes2
