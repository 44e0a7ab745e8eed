#include <catch2/catch.hpp>

#include <memory>
#include <vector>

#include "stokes2/oracle.hpp"

using namespace stokes2;

namespace {
KGridPtr grid_of(double k_max, int npp) {
  return std::make_shared<KGrid>(KGrid::build(k_max, npp));
}
}  // namespace

TEST_CASE("Nystrom solve: residual, conditioning, evenness") {
  ProblemParams p{1.0, 0.5, 1.0};
  auto sys = solve_fredholm(p, grid_of(40.0, 10));
  REQUIRE(sys.residual_inf <= 1e-10);
  REQUIRE(sys.rcond > 1e-10);
  const auto E = sys.solution_values();
  double scale = 0.0;
  for (const auto& v : E) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < E.size(); ++i) {
    REQUIRE(std::abs(E[i] - E[sys.grid->mirror_index(i)]) <= 1e-7 * scale);
  }
}

TEST_CASE("q -> 0 limit reduces to the scaled zeroth Neumann term") {
  ProblemParams p{1.0, 1e-6, 1.0};
  auto grid = grid_of(40.0, 10);
  auto sys = solve_fredholm(p, grid);
  auto e0 = zeroth_term(p, grid);
  const double scale = 2.0 * p.q * p.u0;
  for (std::size_t i = 0; i < grid->size(); i += 7) {
    const Complex want = scale * e0.values[i];
    CAPTURE(i, sys.solution(i), want);
    REQUIRE(std::abs(sys.solution(i) - want) <= 1e-8);
  }
}

TEST_CASE("series resummation converges to the Nystrom solution") {
  ProblemParams p{1.0, 0.5, 1.0};
  SeriesOptions sopts;
  sopts.max_order = 8;
  sopts.k_max = 40.0;
  sopts.nodes_per_panel = 10;
  sopts.series_tol = 1e-14;
  auto series = build_series(p, sopts);
  auto sys = solve_fredholm(p, series.grid);  // shared grid: no discretization bias

  double prev = 1e9;
  for (int N : {0, 2, 4, 8}) {
    double sup = 0.0;
    for (std::size_t i = 0; i < series.grid->size(); ++i)
      sup = std::max(sup, std::abs(series.total_at(i, N) - sys.solution(i)));
    CAPTURE(N, sup);
    REQUIRE(sup < prev);
    prev = sup;
  }
  REQUIRE(prev <= 1e-5);  // by order 8
}

TEST_CASE("series-oracle equivalence across q and omega1") {
  // the order-N reconstruction error contracts like (q * operator norm)^2
  // per two orders; c = sqrt(ratio)/q stays below 1 on converged grids
  for (double om : {1.0, 5.0}) {
    for (double q : {0.1, 0.3, 0.5}) {
      ProblemParams p{om, q, 1.0};
      SeriesOptions sopts;
      sopts.max_order = 5;
      sopts.k_max = 30.0 * om;
      sopts.nodes_per_panel = 6;
      sopts.series_tol = 1e-16;
      auto series = build_series(p, sopts);
      auto sys = solve_fredholm(p, series.grid);
      auto err_at = [&](int N) {
        double sup = 0.0;
        for (std::size_t i = 0; i < series.grid->size(); ++i)
          sup = std::max(sup, std::abs(series.total_at(i, N) - sys.solution(i)));
        return sup;
      };
      const double e1 = err_at(1), e3 = err_at(3), e5 = err_at(5);
      CAPTURE(om, q, e1, e3, e5, std::sqrt(e3 / e1) / q, std::sqrt(e5 / e3) / q);
      REQUIRE(e3 < e1);
      REQUIRE(e5 < e3);
      REQUIRE(e5 <= 2.0 * q * q * e3);  // contraction rate ~ (q c)^2, c < 1
    }
  }
}

TEST_CASE("oracle velocity: even continuation and self-convergence") {
  ProblemParams p{1.0, 0.5, 1.0};

  SECTION("U(-x) = U(x) at rounding level") {
    auto sys = solve_fredholm(p, grid_of(40.0, 10));
    std::vector<double> x = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
    auto prof = oracle_velocity(sys, x);
    for (std::size_t i = 0; i < 3; ++i) {
      const Complex neg = prof.U[i], pos = prof.U[5 - i];
      CAPTURE(x[i], neg, pos);
      REQUIRE(std::abs(neg - pos) <= 1e-12 * std::abs(pos));
    }
  }

  SECTION("doubling the node count leaves U fixed") {
    auto coarse = solve_fredholm(p, grid_of(40.0, 10));
    auto fine = solve_fredholm(p, grid_of(40.0, 20));
    std::vector<double> x = {0.0, 0.5, 1.0, 2.0, 3.5, 5.0};
    auto pc = oracle_velocity(coarse, x);
    auto pf = oracle_velocity(fine, x);
    double sup = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sup = std::max(sup, std::abs(pc.U[i] - pf.U[i]));
    REQUIRE(sup <= 1e-6);
  }

  SECTION("zero spectrum gives zero velocity") {
    auto sys = solve_fredholm(p, grid_of(40.0, 10));
    sys.solution.setZero();
    std::vector<double> x = {0.0, 1.0};
    auto prof = oracle_velocity(sys, x);
    for (const auto& u : prof.U) REQUIRE(std::abs(u) == 0.0);
  }
}

TEST_CASE("oracle velocity matches the Neumann total velocity at x = 0") {
  ProblemParams p{1.0, 0.5, 1.0};
  SeriesOptions sopts;
  sopts.max_order = 8;
  sopts.k_max = 40.0;
  sopts.nodes_per_panel = 10;
  sopts.series_tol = 1e-14;
  auto series = build_series(p, sopts);
  auto sys = solve_fredholm(p, series.grid);
  std::vector<double> x = {0.0};
  auto po = oracle_velocity(sys, x);
  auto ps = total_velocity(series, x);
  REQUIRE(std::abs(po.U[0] - ps.U[0]) <= 1e-4);
}

TEST_CASE("Nystrom interpolation continues the solution off the grid") {
  ProblemParams p{1.0, 0.5, 1.0};
  auto sys = solve_fredholm(p, grid_of(40.0, 10));
  const auto E = sys.solution_values();
  for (double k : {0.0, 0.37, 1.9, 11.0}) {
    const Complex via_eq = sys.interpolate(k);
    const Complex via_poly = sys.grid->interpolate(E, k);
    CAPTURE(k, via_eq, via_poly);
    REQUIRE(std::abs(via_eq - via_poly) <= 1e-6 * std::max(1e-3, std::abs(via_eq)));
  }
}

TEST_CASE("solve succeeds at q = 1, omega1 = 5 with a clean residual") {
  ProblemParams p{5.0, 1.0, 1.0};
  auto sys = solve_fredholm(p, grid_of(40.0, 10));
  REQUIRE(sys.residual_inf <= 1e-10);
}

TEST_CASE("small grids are rejected") {
  ProblemParams p{1.0, 0.5, 1.0};
  REQUIRE_THROWS_AS(solve_fredholm(p, grid_of(4.0, 2)), ConfigError);
}
