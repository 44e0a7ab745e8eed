#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "stokes2/inversion.hpp"
#include "stokes2/neumann.hpp"

namespace stokes2 {

/// Nystrom discretization of the characteristic Fredholm equation
///   E(k) L(k) + (q/2pi) int J(k, k1) E(k1) dk1 = 2 q u0 T1_abs(k):
/// dense matrix L(k_i) delta_ij + (q/2pi) w_j J(k_i, k_j), solved by LU with
/// partial pivoting. The solution carries the full physical scale (the
/// 2 q u0 source is on the right-hand side).
struct NystromSystem {
  ProblemParams params;
  KGridPtr grid;
  Eigen::MatrixXcd matrix;
  Eigen::VectorXcd rhs;
  Eigen::VectorXcd solution;
  double residual_inf = 0.0;  // ||A E - rhs||_inf / ||rhs||_inf
  double rcond = 0.0;
  QuadratureSpec quad;

  std::vector<Complex> solution_values() const {
    return std::vector<Complex>(solution.data(), solution.data() + solution.size());
  }

  /// Natural Nystrom interpolation: the equation itself evaluated at any k,
  /// E(k) = [2 q u0 T1_abs(k) - (q/2pi) sum_j w_j J(k, k_j) E_j] / L(k).
  Complex interpolate(double k) const {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < grid->size(); ++j)
      acc += grid->weights()[j] * eval_J(k, grid->nodes()[j], params, quad) * solution(j);
    const Complex source = 2.0 * params.q * params.u0 * eval_T1_abs(k, params, quad);
    return (source - params.q / (2.0 * kPi) * acc) / eval_L(k, params, quad);
  }
};

/// Dense solve on a caller-provided grid (use the series grid to compare the
/// Neumann resummation against the oracle without discretization bias).
inline NystromSystem solve_fredholm(const ProblemParams& params, KGridPtr grid,
                                    const QuadratureSpec& quad = {}) {
  params.validate();
  quad.validate();
  if (!grid) throw ConfigError("solve_fredholm: null grid");
  const std::size_t m = grid->size();
  if (m < 64) throw ConfigError("solve_fredholm: need at least 64 grid nodes");

  FredholmOperator op(params, grid, quad, /*need_J=*/true);

  NystromSystem sys;
  sys.params = params;
  sys.grid = grid;
  sys.quad = quad;
  sys.matrix.resize(m, m);
  sys.rhs.resize(m);
  const double scale = params.q / (2.0 * kPi);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j)
      sys.matrix(i, j) = scale * grid->weights()[j] * op.J(i, j);
    sys.matrix(i, i) += op.L()[i];
    sys.rhs(i) = 2.0 * params.q * params.u0 * op.T1abs()[i];
  }

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(sys.matrix);
  sys.rcond = lu.rcond();
  if (sys.rcond < 1e-10)
    throw ConditioningError("solve_fredholm: Nystrom matrix is ill-conditioned", sys.rcond);
  sys.solution = lu.solve(sys.rhs);

  const double rhs_inf = sys.rhs.lpNorm<Eigen::Infinity>();
  sys.residual_inf =
      (sys.matrix * sys.solution - sys.rhs).lpNorm<Eigen::Infinity>() / std::max(rhs_inf, 1e-300);
  if (rhs_inf > 0.0 && sys.residual_inf > 1e-10)
    throw ToleranceError("solve_fredholm: dense-solve residual exceeds 1e-10",
                         sys.residual_inf);
  return sys;
}

/// Convenience overload: builds a graded grid with about the requested
/// number of nodes.
inline NystromSystem solve_fredholm(const ProblemParams& params, int min_nodes = 256,
                                    double k_max = 40.0, const QuadratureSpec& quad = {}) {
  if (min_nodes < 64) throw ConfigError("solve_fredholm: need at least 64 nodes");
  int npp = 8;
  auto grid = std::make_shared<KGrid>(KGrid::build(k_max, npp));
  while (static_cast<int>(grid->size()) < min_nodes) {
    npp *= 2;
    grid = std::make_shared<KGrid>(KGrid::build(k_max, npp));
  }
  return solve_fredholm(params, grid, quad);
}

/// Oracle velocity U(x) = (1/4pi) int e^{ikx} E(k) dk from the Nystrom
/// solution (the factor 2 of the ansatz 2U = F^{-1}[E] is absorbed here).
/// Supports negative x for the even-continuation check U(-x) = U(x).
inline VelocityProfile oracle_velocity(const NystromSystem& sys, std::span<const double> x_grid,
                                       InversionOptions opts = {}) {
  double x_max = 0.0;
  for (double x : x_grid) x_max = std::max(x_max, std::abs(x));
  SpectrumInverter inv(sys.grid, {sys.solution_values()}, x_max, opts);
  VelocityProfile prof;
  prof.omega1 = sys.params.omega1;
  prof.q = sys.params.q;
  prof.orders = -1;  // not a truncated series
  prof.x.assign(x_grid.begin(), x_grid.end());
  for (double x : x_grid) {
    const Complex u = inv.invert(0, x) / (4.0 * kPi);
    prof.U.push_back(u);
    prof.w.push_back(u.real() / sys.params.u0);
  }
  return prof;
}

}  // namespace stokes2
