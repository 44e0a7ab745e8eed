// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerance in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "stokes2/stokes2.hpp"

using namespace stokes2;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& metric,
            double seconds) {
  std::printf("%s  criterion-%d  %-34s  %s  (%.2fs)\n", pass ? "PASS" : "FAIL", id,
              name.c_str(), metric.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a, b);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------- 1
void criterion1_wall_value() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (double q : {1.0, 0.5, 0.2}) {
    const double w0 = hf_velocity(0.0, q, 5.0, 1e-10).real();
    worst = std::max(worst, std::abs(w0 - 0.5 * q));
  }
  const double dt = seconds_since(t0);
  report(1, "wall-value law w(0) = q/2", worst <= 1e-8 && dt < 1.0,
         fmt("max|w(0)-q/2| = %.2e, tol 1e-8", worst), dt);
}

// ---------------------------------------------------------------- 2
void criterion2_figures() {
  const auto t0 = Clock::now();
  auto fig1 = figure_data(Figure::fig1, 1e-8);
  auto fig2 = figure_data(Figure::fig2, 1e-8);
  bool ok = fig1.size() == 2 && fig2.size() == 3;
  double worst_intercept = 0.0;
  const double q_values[3] = {1.0, 0.5, 0.2};
  for (int i = 0; i < 3; ++i)
    worst_intercept =
        std::max(worst_intercept, std::abs(fig2[i].w.front() - 0.5 * q_values[i]));
  ok = ok && worst_intercept <= 1e-8;
  // envelope decay |w(4)| < 0.05 q at omega1 >= 5
  for (const auto& c : fig1) ok = ok && std::abs(c.w.back()) < 0.05 * c.q;
  for (const auto& c : fig2) ok = ok && std::abs(c.w.back()) < 0.05 * c.q;
  // the omega1 = 6 curve decays at least as fast in sup-norm on [1, 4]
  double sup5 = 0.0, sup6 = 0.0;
  for (std::size_t i = 0; i < fig1[0].x.size(); ++i) {
    if (fig1[0].x[i] < 1.0) continue;
    sup5 = std::max(sup5, std::abs(fig1[0].w[i]));
    sup6 = std::max(sup6, std::abs(fig1[1].w[i]));
  }
  ok = ok && (sup6 <= sup5);
  const double dt = seconds_since(t0);
  ok = ok && dt < 5.0;
  report(2, "figure datasets reproduce", ok,
         fmt("intercept err %.2e, sup[1,4]: w6 %.3e", worst_intercept, sup6), dt);
}

// ---------------------------------------------------------------- 3
void criterion3_series_vs_oracle() {
  const auto t0 = Clock::now();
  ProblemParams p{1.0, 0.5, 1.0};
  SeriesOptions sopts;
  sopts.max_order = 8;
  sopts.k_max = 40.0;
  sopts.nodes_per_panel = 16;
  sopts.series_tol = 1e-14;
  auto series = build_series(p, sopts);
  auto sys = solve_fredholm(p, series.grid, sopts.quad);

  std::vector<double> x;
  for (int i = 0; i <= 50; ++i) x.push_back(5.0 * i / 50.0);
  auto vs = total_velocity(series, x);
  auto vo = oracle_velocity(sys, x);
  double sup = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sup = std::max(sup, std::abs(vs.U[i] - vo.U[i]));
  const double dt = seconds_since(t0);
  report(3, "order-8 series vs Nystrom oracle", sup <= 1e-4 && dt < 120.0,
         fmt("sup|dU| = %.2e, tol 1e-4", sup), dt);
}

// ---------------------------------------------------------------- 4
void criterion4_kernel_identities() {
  const auto t0 = Clock::now();
  ProblemParams p{1.0, 0.5, 1.0};
  const Complex z0 = p.z0();
  double worst = 0.0;
  std::mt19937 rng(2026);
  std::uniform_real_distribution<double> dk(-12.0, 12.0);
  for (int i = 0; i < 12; ++i) {
    const double k = dk(rng), k1 = dk(rng);
    worst = std::max(worst, std::abs(eval_L(k, p) - eval_L(-k, p)));
    worst = std::max(worst, std::abs(eval_J(k, k1, p) - eval_J(k1, k, p)));
  }
  worst = std::max(worst, std::abs(eval_T(1, 0.0, p)));
  worst = std::max(worst, std::abs(eval_T1_abs(0.0, p) - 1.0 / (kSqrtPi * z0)));
  worst = std::max(worst, std::abs(eval_J(0.0, 0.0, p) - 1.0 / (kSqrtPi * z0 * z0)));
  for (double k : {0.1, 1.0, 10.0})
    worst = std::max(worst,
                     std::abs(eval_L(k, p) - eval_lambda(dispersion_point(k, p), p) / z0));
  const double dt = seconds_since(t0);
  report(4, "kernel identity suite", worst <= 1e-9 && dt < 10.0,
         fmt("max identity residual = %.2e, tol 1e-9", worst), dt);
}

// ---------------------------------------------------------------- 5
void criterion5_residue() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  {
    ProblemParams p{1.0, 0.5, 1.0};
    auto [num, closed] = residue_check(1.0, 1.0, p);
    worst = std::max(worst, std::abs(num - closed));
  }
  {
    ProblemParams p{5.0, 0.5, 1.0};
    auto [num, closed] = residue_check(2.0, 0.5, p);
    worst = std::max(worst, std::abs(num - closed));
  }
  {
    ProblemParams p{1.0, 0.5, 1.0};
    auto [num, closed] = residue_check(-1.0, 1.0, p);
    worst = std::max(worst, std::abs(num));
    worst = std::max(worst, std::abs(closed));
  }
  const double dt = seconds_since(t0);
  report(5, "residue formula", worst <= 1e-8, fmt("max|num-closed| = %.2e, tol 1e-8", worst),
         dt);
}

// ---------------------------------------------------------------- 6
void criterion6_boundary_condition() {
  const auto t0 = Clock::now();
  const double q = 0.3;
  ProblemParams p{1.0, q, 1.0};
  SeriesOptions sopts;
  sopts.max_order = 8;
  sopts.k_max = 40.0;
  sopts.nodes_per_panel = 16;
  sopts.series_tol = 1e-16;
  auto series = build_series(p, sopts);
  FourierInverter inv(series, 0.0);
  GaussRule gh = gauss_hermite(16);
  const double target = 2.0 * q * p.u0;

  std::vector<double> residual;
  for (int N = 2; N <= 8; ++N) {
    double worst = 0.0;
    for (double mu : gh.x) {
      if (mu <= 0.0) continue;
      const Complex lhs =
          inv.distribution_at(0.0, mu, N) - (1.0 - q) * inv.distribution_at(0.0, -mu, N);
      worst = std::max(worst, std::abs(lhs - target));
    }
    residual.push_back(worst);
  }
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < residual.size(); ++i)
    monotone = monotone && residual[i + 1] < residual[i];
  const bool ok = monotone && residual.back() <= 1e-2 * target;
  const double dt = seconds_since(t0);
  report(6, "boundary-condition residual", ok,
         fmt("res(N=8) = %.2e, tol %.2e, monotone", residual.back(), 1e-2 * target), dt);
}

// ---------------------------------------------------------------- 7
void criterion7_moment_consistency() {
  const auto t0 = Clock::now();
  ProblemParams p{1.0, 0.5, 1.0};
  SeriesOptions sopts;
  sopts.max_order = 6;
  sopts.k_max = 80.0;  // the k-truncation tail limits the moment closure
  sopts.nodes_per_panel = 12;
  sopts.series_tol = 1e-14;
  auto series = build_series(p, sopts);
  FourierInverter inv(series, 3.0);
  double worst = 0.0;
  for (double x : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    auto slice = distribution_slice_moment(series, x);
    const Complex via_moment = moment_velocity(slice);
    const Complex direct = inv.total_velocity_at(x);
    worst = std::max(worst, std::abs(via_moment - direct) / std::abs(direct));
  }
  const double dt = seconds_since(t0);
  report(7, "moment consistency", worst <= 1e-5,
         fmt("max rel |dU| = %.2e, tol 1e-5", worst), dt);
}

// ---------------------------------------------------------------- 8
void criterion8_high_frequency_crossover() {
  const auto t0 = Clock::now();
  SeriesOptions sopts;
  sopts.max_order = 0;
  sopts.k_max = 2500.0;
  sopts.nodes_per_panel = 12;
  auto series = build_series(ProblemParams{100.0, 1.0, 1.0}, sopts);
  FourierInverter inv(series, 0.2);
  double sup_diff = 0.0, sup_ref = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double x = 0.2 * i / 20.0;
    const Complex full = inv.velocity_term(0, x);
    const Complex hf = hf_velocity(x, 1.0, 100.0, 1e-10);
    sup_diff = std::max(sup_diff, std::abs(full - hf));
    sup_ref = std::max(sup_ref, std::abs(hf));
  }
  const double rel = sup_diff / sup_ref;
  const double dt = seconds_since(t0);
  report(8, "high-frequency crossover", rel <= 2e-2,
         fmt("rel sup diff = %.2e, tol 2e-2", rel), dt);
}

}  // namespace

int main() {
  criterion1_wall_value();
  criterion2_figures();
  criterion3_series_vs_oracle();
  criterion4_kernel_identities();
  criterion5_residue();
  criterion6_boundary_condition();
  criterion7_moment_consistency();
  criterion8_high_frequency_crossover();
  if (g_failures > 0) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
