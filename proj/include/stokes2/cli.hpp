#pragma once

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stokes2/run.hpp"

namespace stokes2 {

/// Exit codes: 0 success, 2 configuration error, 3 numerical failure.
enum ExitCode { kOk = 0, kConfigFailure = 2, kNumericalFailure = 3 };

inline void attach_options(CLI::App& app, RunConfig& cfg) {
  static const std::map<std::string, Mode> mode_names{
      {"velocity", Mode::velocity},
      {"distribution", Mode::distribution},
      {"oracle-compare", Mode::oracle_compare},
      {"asymptotic", Mode::asymptotic},
      {"figures", Mode::figures}};
  app.add_option("--mode", cfg.mode, "run mode")
      ->required()
      ->transform(CLI::CheckedTransformer(mode_names, CLI::ignore_case));
  app.add_option("--omega1", cfg.omega1, "dimensionless oscillation frequency (> 0)");
  app.add_option("--q", cfg.q, "diffuseness / accommodation coefficient in [0, 1]");
  app.add_option("--u0", cfg.u0, "wall velocity amplitude (> 0)");
  app.add_option("--order", cfg.order, "maximum Neumann order N");
  app.add_option("--k-max", cfg.k_max, "wavenumber truncation of the spectral grid");
  app.add_option("--nodes-per-panel", cfg.nodes_per_panel, "Gauss nodes per spectral panel");
  app.add_option("--x-max", cfg.x_max, "largest x of the output grid");
  app.add_option("--x-points", cfg.x_points, "number of x samples");
  app.add_option("--mu", cfg.mu, "mu values for distribution mode (comma separated)")
      ->delimiter(',');
  app.add_option("--format", cfg.format, "output format: csv or json");
  app.add_option("--out", cfg.out, "output path (default <mode>.<format>)");
  app.add_flag("--per-order", cfg.per_order, "emit per-order velocity columns");
  app.add_option("--tol", cfg.tol, "target tolerance for asymptotic quadratures");
}

/// Full command-line entry point; returns the process exit code.
inline int run_main(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{"Neumann-series solver for the kinetic second Stokes problem"};
  attach_options(app, cfg);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigFailure;
  }

  try {
    RunResult res = run(cfg);
    std::cerr << "wrote " << res.path << "\n";
    if (!res.diagnostics.empty()) std::cerr << "diagnostics: " << res.diagnostics.dump() << "\n";
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

inline int run_main(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("stokes2");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace stokes2
