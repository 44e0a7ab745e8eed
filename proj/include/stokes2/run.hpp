#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stokes2/asymptotics.hpp"
#include "stokes2/inversion.hpp"
#include "stokes2/oracle.hpp"

namespace stokes2 {

enum class Mode { velocity, distribution, oracle_compare, asymptotic, figures };

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::velocity: return "velocity";
    case Mode::distribution: return "distribution";
    case Mode::oracle_compare: return "oracle-compare";
    case Mode::asymptotic: return "asymptotic";
    case Mode::figures: return "figures";
  }
  return "?";
}

/// Complete description of one solver run. All numeric fields are validated
/// against the library invariants before any computation starts.
struct RunConfig {
  Mode mode = Mode::velocity;
  double omega1 = 1.0;
  double q = 0.5;
  double u0 = 1.0;
  int order = 8;
  double k_max = 40.0;
  int nodes_per_panel = 16;
  double x_max = 10.0;
  int x_points = 60;
  std::vector<double> mu;  // distribution mode: explicit mu values
  std::string format = "csv";
  std::string out;  // empty: "<mode>.<ext>"
  bool per_order = false;
  double tol = 1e-8;

  ProblemParams params() const { return ProblemParams{omega1, q, u0}; }

  void validate() const {
    params().validate();
    if (order < 0) throw ConfigError("order must be >= 0");
    if (!std::isfinite(k_max) || !(k_max > 0.0)) throw ConfigError("k_max must be > 0");
    if (nodes_per_panel < 2) throw ConfigError("nodes-per-panel must be >= 2");
    if (!std::isfinite(x_max) || x_max < 0.0) throw ConfigError("x_max must be >= 0");
    if (x_points < 1) throw ConfigError("x_points must be >= 1");
    if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
    if (!std::isfinite(tol) || !(tol > 0.0)) throw ConfigError("tol must be > 0");
    for (double m : mu)
      if (!std::isfinite(m)) throw ConfigError("mu values must be finite");
  }

  std::string out_path() const {
    if (!out.empty()) return out;
    return to_string(mode) + (format == "csv" ? std::string(".csv") : std::string(".json"));
  }
};

struct RunResult {
  std::string path;
  nlohmann::json diagnostics;
};

namespace detail {

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Geometric-ish x-grid on [0, x_max]: clustered near the wall where the
/// profile varies fastest, 0 included.
inline std::vector<double> default_x_grid(double x_max, int n) {
  std::vector<double> x(n);
  if (n == 1 || x_max == 0.0) {
    for (auto& v : x) v = 0.0;
    return x;
  }
  const double a = 3.0;
  for (int i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / (n - 1);
    x[i] = x_max * (std::exp(a * u) - 1.0) / (std::exp(a) - 1.0);
  }
  x.front() = 0.0;
  x.back() = x_max;
  return x;
}

inline nlohmann::json config_json(const RunConfig& c) {
  nlohmann::json j;
  j["mode"] = to_string(c.mode);
  j["omega1"] = c.omega1;
  j["q"] = c.q;
  j["u0"] = c.u0;
  j["order"] = c.order;
  j["k_max"] = c.k_max;
  j["nodes_per_panel"] = c.nodes_per_panel;
  j["x_max"] = c.x_max;
  j["x_points"] = c.x_points;
  j["mu"] = c.mu;
  j["format"] = c.format;
  j["per_order"] = c.per_order;
  j["tol"] = c.tol;
  return j;
}

inline constexpr const char* kUnitsNote =
    "units: x in mean free paths (nu-normalized), velocities normalized by u0, "
    "complex values as (re, im) pairs";

struct TableWriter {
  const RunConfig& config;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json diagnostics;

  void write(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open output file: " + path);
    if (config.format == "csv") {
      os << "# stokes2 " << to_string(config.mode) << "\n";
      os << "# " << kUnitsNote << "\n";
      nlohmann::json cfg = config_json(config);
      os << "# config: " << cfg.dump() << "\n";
      if (!diagnostics.empty()) os << "# diagnostics: " << diagnostics.dump() << "\n";
      os << "# columns: ";
      for (std::size_t i = 0; i < columns.size(); ++i)
        os << columns[i] << (i + 1 < columns.size() ? "," : "\n");
      for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i)
          os << num(r[i]) << (i + 1 < r.size() ? "," : "\n");
      }
    } else {
      nlohmann::json j;
      j["config"] = config_json(config);
      j["config"]["units"] = kUnitsNote;
      nlohmann::json results;
      results["columns"] = columns;
      results["rows"] = rows;
      j["results"] = results;
      j["diagnostics"] = diagnostics;
      os << j.dump(2) << "\n";
    }
  }
};

}  // namespace detail

/// Executes one configured run and writes the artifact file. Output is
/// deterministic for a fixed config (fixed node counts, serial evaluation
/// order, no timestamps).
inline RunResult run(const RunConfig& config) {
  config.validate();
  const ProblemParams params = config.params();

  detail::TableWriter table{config, {}, {}, {}};
  InversionOptions iopts;
  iopts.quad.rel_tol = std::min(1e-10, config.tol);

  SeriesOptions sopts;
  sopts.max_order = config.order;
  sopts.k_max = config.k_max;
  sopts.nodes_per_panel = config.nodes_per_panel;

  auto series_diag = [&](const SeriesSolution& s) {
    nlohmann::json j;
    j["orders_built"] = s.truncation_order;
    j["term_norms"] = s.term_norms;
    j["ratio_history"] = s.ratio_history;
    j["decay_ratio"] = s.decay_ratio;
    j["converged"] = s.converged;
    j["diverging"] = s.diverging;
    return j;
  };

  switch (config.mode) {
    case Mode::velocity: {
      SeriesSolution series = build_series(params, sopts);
      const auto x = detail::default_x_grid(config.x_max, config.x_points);
      FourierInverter inv(series, config.x_max, iopts);
      table.columns = {"x", "re_u", "im_u", "w"};
      if (config.per_order)
        for (int n = 0; n <= series.truncation_order; ++n)
          table.columns.push_back("re_u" + std::to_string(n));
      for (double xi : x) {
        const auto terms = inv.velocity_terms(xi);
        Complex u = 0.0;
        double qn = 1.0;
        for (const Complex& t : terms) {
          u += qn * t;
          qn *= params.q;
        }
        u *= params.q * params.u0;
        std::vector<double> row = {xi, u.real(), u.imag(), u.real() / params.u0};
        if (config.per_order)
          for (const Complex& t : terms) row.push_back(t.real());
        table.rows.push_back(std::move(row));
      }
      table.diagnostics = series_diag(series);
      break;
    }

    case Mode::distribution: {
      SeriesSolution series = build_series(params, sopts);
      const auto x = detail::default_x_grid(config.x_max, config.x_points);
      FourierInverter inv(series, config.x_max, iopts);
      std::vector<double> mu = config.mu;
      if (mu.empty()) {
        GaussRule gh = gauss_hermite(16);
        mu = gh.x;
      }
      table.columns = {"x", "mu", "re_h", "im_h"};
      for (double xi : x)
        for (double m : mu) {
          const Complex h = inv.distribution_at(xi, m);
          table.rows.push_back({xi, m, h.real(), h.imag()});
        }
      // moment-consistency residual on the internal moment-accurate mu-rule
      double worst = 0.0;
      for (double xi : {x.front(), x[x.size() / 2], x.back()}) {
        GaussRule rule = moment_mu_rule(xi, params.omega1);
        Complex um = 0.0;
        for (std::size_t i = 0; i < rule.x.size(); ++i)
          um += rule.w[i] * inv.distribution_at(xi, rule.x[i]);
        um /= 2.0 * kSqrtPi;
        const Complex u = inv.total_velocity_at(xi);
        worst = std::max(worst, std::abs(um - u) / std::max(std::abs(u), 1e-300));
      }
      table.diagnostics = series_diag(series);
      table.diagnostics["moment_residual_rel"] = worst;
      break;
    }

    case Mode::oracle_compare: {
      SeriesSolution series = build_series(params, sopts);
      NystromSystem sys = solve_fredholm(params, series.grid, sopts.quad);
      const auto x = detail::default_x_grid(config.x_max, config.x_points);
      VelocityProfile vs = total_velocity(series, x, iopts);
      VelocityProfile vo = oracle_velocity(sys, x, iopts);
      table.columns = {"x", "re_u_series", "im_u_series", "re_u_oracle", "im_u_oracle",
                       "abs_diff"};
      double sup = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = std::abs(vs.U[i] - vo.U[i]);
        sup = std::max(sup, d);
        table.rows.push_back(
            {x[i], vs.U[i].real(), vs.U[i].imag(), vo.U[i].real(), vo.U[i].imag(), d});
      }
      table.diagnostics = series_diag(series);
      table.diagnostics["sup_diff"] = sup;
      table.diagnostics["nystrom_residual"] = sys.residual_inf;
      table.diagnostics["nystrom_rcond"] = sys.rcond;
      break;
    }

    case Mode::asymptotic: {
      const auto x = detail::default_x_grid(config.x_max, config.x_points);
      table.columns = {"x", "re_u", "im_u", "w"};
      for (double xi : x) {
        const Complex u = hf_velocity(xi, params.q, params.omega1, config.tol);
        table.rows.push_back({xi, u.real(), u.imag(), u.real()});
      }
      break;
    }

    case Mode::figures: {
      table.columns = {"fig", "omega1", "q", "x", "w"};
      for (int fig : {1, 2}) {
        auto curves = figure_data(fig == 1 ? Figure::fig1 : Figure::fig2, config.tol);
        for (const auto& c : curves)
          for (std::size_t i = 0; i < c.x.size(); ++i)
            table.rows.push_back({static_cast<double>(fig), c.omega1, c.q, c.x[i], c.w[i]});
      }
      break;
    }
  }

  RunResult res;
  res.path = config.out_path();
  res.diagnostics = table.diagnostics;
  table.write(res.path);
  return res;
}

}  // namespace stokes2
