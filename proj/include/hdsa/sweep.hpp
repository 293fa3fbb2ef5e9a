#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hdsa/config.hpp"

namespace hdsa {

/// One (zeta, eta) cell of the experiment grid: simulation statistics over
/// replications next to the corresponding saddle-point ("theory") values.
/// `reps` counts the replications that actually contributed (failures are
/// logged and excluded); std fields are sample standard deviations and 0 by
/// convention for a single replication.
struct SweepRow {
  double zeta = 0, eta = 0, alpha = 0;
  int n = 0, p = 0, reps = 0;
  double sim_w_mean = 0, sim_w_std = 0;
  double sim_v_mean = 0, sim_v_std = 0;
  double sim_cindex_mean = 0, sim_cindex_std = 0;
  double sim_ribs_mean = 0, sim_ribs_std = 0;
  double th_w = 0, th_v = 0, th_cindex = 0, th_ribs = 0;
  double rs_residual = 0;
  int rs_iterations = 0;
  int failures = 0;  ///< not a CSV column; surfaced in the log
};

inline constexpr char kCsvHeader[] =
    "zeta,eta,alpha,n,p,reps,sim_w_mean,sim_w_std,sim_v_mean,sim_v_std,"
    "sim_cindex_mean,sim_cindex_std,sim_ribs_mean,sim_ribs_std,"
    "th_w,th_v,th_cindex,th_ribs,rs_residual,rs_iterations";

/// One cell on its own (a sweep restricted to a single eta).
SweepRow run_cell(const ExperimentConfig& cfg, double zeta, double eta,
                  bool quiet = true);

/// The full grid: one row per (zeta, eta), zeta-major, eta in path order.
/// Replication streams are keyed by (seed, zeta bits, rep) and theory
/// streams by (seed, zeta bits), so removing one zeta from the grid leaves
/// the other rows bit-identical. Cells and replications run concurrently up
/// to the resolved worker count; aggregation is keyed by index, so the CSV
/// is deterministic for a given (config, seed).
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, bool quiet = false);

/// 17-significant-digit CSV with the exact header above.
void write_csv(const std::vector<SweepRow>& rows, std::ostream& out);
std::vector<SweepRow> read_csv(std::istream& in);

std::string format_row(const SweepRow& row);

}  // namespace hdsa
