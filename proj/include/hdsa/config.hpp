#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hdsa {

/// Full experiment frame. Defaults reproduce the reference protocol:
/// n = 400, alpha = 0.01, 50 replications, population 2000, 12 equispaced
/// knots (11 intervals) on [0, 3], eta path of 20 log-spaced points in
/// [0.1, 6].
struct ExperimentConfig {
  int n = 400;
  std::vector<double> zeta_grid = {0.25, 0.5, 1.0};
  std::vector<double> eta_grid;  ///< explicit grid; empty = log-spaced below
  double eta_min = 0.1;
  double eta_max = 6.0;
  int eta_count = 20;
  double alpha = 0.01;
  int knot_count = 12;  ///< knots on [0, censor_hi]; intervals = knot_count - 1
  int reps = 50;
  std::uint64_t seed = 1;
  int population_m = 2000;
  double rs_tol = 1e-8;
  double rs_damping = 0.5;
  int rs_max_iter = 50000;
  int n_test = 0;        ///< 0 = same as n
  int metrics_m = 0;     ///< theory-metrics population; 0 = population_m
  double beta0_norm = 1.0;
  double censor_lo = 1.0;
  double censor_hi = 3.0;
  double grad_tol = 1e-8;
  int fit_max_iter = 500;
  unsigned workers = 0;  ///< 0 = hardware concurrency; HDSA_WORKERS overrides
  bool plots = true;

  /// The eta path actually used: the explicit grid when given, otherwise
  /// eta_count points log-spaced on [eta_min, eta_max].
  std::vector<double> etas() const;

  /// p for a cell: n * zeta rounded to the nearest integer, >= 1.
  int p_for(double zeta) const;

  int effective_n_test() const { return n_test > 0 ? n_test : n; }
  int effective_metrics_m() const { return metrics_m > 0 ? metrics_m : population_m; }

  /// Throws ConfigError if any field is out of range.
  void validate() const;
};

/// Parse a flat key = value config file (bracketed-table syntax: `#`
/// comments, numeric/boolean scalars, `[a, b]` arrays of numbers). Unknown
/// keys are errors. A missing file is a ConfigError naming the path.
ExperimentConfig load_config(const std::string& path);

/// Same parser over an in-memory document.
ExperimentConfig parse_config(const std::string& text);

}  // namespace hdsa
