#include "hdsa/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>

#include "hdsa/errors.hpp"
#include "hdsa/fit.hpp"
#include "hdsa/metrics.hpp"
#include "hdsa/rs.hpp"
#include "hdsa/thread_pool.hpp"

namespace hdsa {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

TrueModel model_from(const ExperimentConfig& cfg) {
  TrueModel m = TrueModel::log_logistic();
  m.beta0_norm = cfg.beta0_norm;
  m.censor_lo = cfg.censor_lo;
  m.censor_hi = cfg.censor_hi;
  return m;
}

struct RepRecord {
  bool ok = false;
  double w = kNaN, v = kNaN, cindex = kNaN, ribs = kNaN;
};

struct TheoryRecord {
  bool ok = false;
  double w = kNaN, v = kNaN, cindex = kNaN, ribs = kNaN;
  double residual = kNaN;
  int iterations = 0;
};

std::mutex log_mutex;

void log_line(bool quiet, const std::string& line) {
  if (quiet) return;
  std::lock_guard<std::mutex> lock(log_mutex);
  std::cerr << line << "\n";
}

// Theory lane for one zeta: RS solves warm-started from large to small eta,
// plus saddle-side metrics on a fresh evaluation population that is
// identical for every eta (same derived stream).
std::vector<TheoryRecord> theory_lane(const ExperimentConfig& cfg, double zeta,
                                      const std::vector<double>& etas,
                                      bool quiet) {
  const TrueModel model = model_from(cfg);
  const KnotGrid grid = KnotGrid::equispaced(cfg.censor_hi, cfg.knot_count);
  Rng pop_rng(derive_stream(cfg.seed, {label_hash("rspop"), bits_of(zeta)}));
  const RSPopulation pop =
      build_population(cfg.population_m, model, grid, pop_rng);

  std::vector<std::size_t> order(etas.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return etas[a] > etas[b]; });

  RSOptions opts{cfg.rs_tol, cfg.rs_damping, cfg.rs_max_iter};
  std::vector<TheoryRecord> out(etas.size());
  const RSState* warm = nullptr;
  RSState last;
  for (std::size_t idx : order) {
    RSSolution sol = rs_solve(pop, etas[idx], cfg.alpha, zeta, opts, warm);
    TheoryRecord& rec = out[idx];
    rec.residual = sol.residuals.max();
    rec.iterations = sol.iterations;
    if (!sol.converged) {
      std::ostringstream msg;
      msg << "[rs] no convergence at zeta=" << zeta << " eta=" << etas[idx]
          << " (residual " << rec.residual << "); theory columns left empty";
      log_line(quiet, msg.str());
      continue;
    }
    last = sol.state;
    warm = &last;
    rec.ok = true;
    rec.w = sol.state.w;
    rec.v = sol.state.v;
    try {
      Rng eval_rng(
          derive_stream(cfg.seed, {label_hash("thmetrics"), bits_of(zeta)}));
      const MetricReport rep = theoretical_metrics(
          sol, model, grid, cfg.effective_metrics_m(), eval_rng);
      rec.cindex = rep.cindex;
      rec.ribs = rep.ribs;
    } catch (const UndefinedMetricError& e) {
      log_line(quiet, std::string("[rs] metric undefined: ") + e.what());
    }
  }
  return out;
}

// Simulation lane for one (zeta, rep): one dataset fitted along the whole
// eta path with warm starts, scored on one fresh test cohort.
std::vector<RepRecord> sim_lane(const ExperimentConfig& cfg, double zeta,
                                int rep, const std::vector<double>& etas,
                                bool quiet) {
  const TrueModel model = model_from(cfg);
  const KnotGrid grid = KnotGrid::equispaced(cfg.censor_hi, cfg.knot_count);
  const int p = cfg.p_for(zeta);

  std::vector<RepRecord> out(etas.size());
  Rng data_rng(derive_stream(
      cfg.seed, {label_hash("dataset"), bits_of(zeta), static_cast<std::uint64_t>(rep)}));
  Dataset data;
  Eigen::VectorXd omega_null;
  Dataset test;
  try {
    data = generate_dataset(cfg.n, p, model, data_rng);
    omega_null = fit_null_omega(data, grid, cfg.alpha);
    Rng test_rng(derive_stream(
        cfg.seed,
        {label_hash("testset"), bits_of(zeta), static_cast<std::uint64_t>(rep)}));
    test = generate_dataset(cfg.effective_n_test(), data.beta0, model, test_rng);
  } catch (const std::exception& e) {
    std::ostringstream msg;
    msg << "[sim] zeta=" << zeta << " rep=" << rep
        << ": data generation failed: " << e.what();
    log_line(quiet, msg.str());
    return out;
  }

  PexLikelihood like(data, grid);
  std::vector<std::size_t> order(etas.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return etas[a] > etas[b]; });

  FitResult prev;
  bool have_prev = false;
  for (std::size_t idx : order) {
    FitConfig fc{etas[idx], cfg.alpha, cfg.grad_tol, cfg.fit_max_iter};
    try {
      FitResult fr = have_prev
                         ? fit(like, fc, &prev.beta_hat, &prev.omega_hat)
                         : fit(like, fc);
      RepRecord& rec = out[idx];
      rec.w = fr.w_hat;
      rec.v = fr.v_hat;
      const MetricReport rep_metrics =
          empirical_test_metrics(fr, omega_null, model, grid, test);
      rec.cindex = rep_metrics.cindex;
      rec.ribs = rep_metrics.ribs;
      rec.ok = true;
      prev = std::move(fr);
      have_prev = true;
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "[sim] zeta=" << zeta << " eta=" << etas[idx] << " rep=" << rep
          << ": " << e.what();
      log_line(quiet, msg.str());
      have_prev = false;  // restart the warm chain after a failure
    }
  }
  return out;
}

struct MeanStd {
  double mean = kNaN, std = 0.0;
  int count = 0;
};

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd ms;
  ms.count = static_cast<int>(xs.size());
  if (xs.empty()) return ms;
  ms.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  if (xs.size() > 1) {
    double acc = 0.0;
    for (double x : xs) acc += (x - ms.mean) * (x - ms.mean);
    ms.std = std::sqrt(acc / (xs.size() - 1));
  }
  return ms;
}

std::vector<SweepRow> assemble_rows(
    const ExperimentConfig& cfg, double zeta, const std::vector<double>& etas,
    const std::vector<TheoryRecord>& theory,
    const std::vector<std::vector<RepRecord>>& reps) {
  std::vector<SweepRow> rows(etas.size());
  for (std::size_t e = 0; e < etas.size(); ++e) {
    SweepRow& row = rows[e];
    row.zeta = zeta;
    row.eta = etas[e];
    row.alpha = cfg.alpha;
    row.n = cfg.n;
    row.p = cfg.p_for(zeta);

    std::vector<double> w, v, ci, ri;
    for (const auto& rep : reps) {
      if (!rep[e].ok) continue;
      w.push_back(rep[e].w);
      v.push_back(rep[e].v);
      ci.push_back(rep[e].cindex);
      ri.push_back(rep[e].ribs);
    }
    const MeanStd mw = mean_std(w), mv = mean_std(v), mc = mean_std(ci),
                  mr = mean_std(ri);
    row.reps = mw.count;
    row.failures = static_cast<int>(reps.size()) - mw.count;
    row.sim_w_mean = mw.mean;
    row.sim_w_std = mw.std;
    row.sim_v_mean = mv.mean;
    row.sim_v_std = mv.std;
    row.sim_cindex_mean = mc.mean;
    row.sim_cindex_std = mc.std;
    row.sim_ribs_mean = mr.mean;
    row.sim_ribs_std = mr.std;

    row.th_w = theory[e].w;
    row.th_v = theory[e].v;
    row.th_cindex = theory[e].cindex;
    row.th_ribs = theory[e].ribs;
    row.rs_residual = theory[e].residual;
    row.rs_iterations = theory[e].iterations;
  }
  return rows;
}

}  // namespace

SweepRow run_cell(const ExperimentConfig& cfg, double zeta, double eta,
                  bool quiet) {
  cfg.validate();
  const std::vector<double> etas{eta};
  const auto theory = theory_lane(cfg, zeta, etas, quiet);
  std::vector<std::vector<RepRecord>> reps(cfg.reps);
  for (int r = 0; r < cfg.reps; ++r)
    reps[r] = sim_lane(cfg, zeta, r, etas, quiet);
  SweepRow row = assemble_rows(cfg, zeta, etas, theory, reps)[0];
  if (row.failures > 0) {
    std::ostringstream msg;
    msg << "[cell] zeta=" << zeta << " eta=" << eta << ": " << row.failures
        << " replication(s) failed; cell flagged";
    log_line(quiet, msg.str());
  }
  return row;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, bool quiet) {
  cfg.validate();
  const std::vector<double> etas = cfg.etas();
  const std::size_t nz = cfg.zeta_grid.size();
  const std::size_t nr = static_cast<std::size_t>(cfg.reps);

  std::vector<std::vector<TheoryRecord>> theory(nz);
  std::vector<std::vector<std::vector<RepRecord>>> sims(
      nz, std::vector<std::vector<RepRecord>>(nr));

  // Task 0..nz-1: theory lanes; then one task per (zeta, rep).
  const std::size_t tasks = nz * (1 + nr);
  parallel_for(tasks, resolve_workers(cfg.workers), [&](std::size_t t) {
    if (t < nz) {
      theory[t] = theory_lane(cfg, cfg.zeta_grid[t], etas, quiet);
      log_line(quiet, "[sweep] theory lane done for zeta=" +
                          std::to_string(cfg.zeta_grid[t]));
    } else {
      const std::size_t z = (t - nz) / nr;
      const std::size_t r = (t - nz) % nr;
      sims[z][r] = sim_lane(cfg, cfg.zeta_grid[z], static_cast<int>(r), etas, quiet);
    }
  });

  std::vector<SweepRow> rows;
  rows.reserve(nz * etas.size());
  for (std::size_t z = 0; z < nz; ++z) {
    auto block = assemble_rows(cfg, cfg.zeta_grid[z], etas, theory[z], sims[z]);
    for (auto& row : block) {
      if (row.failures > 0) {
        std::ostringstream msg;
        msg << "[sweep] zeta=" << row.zeta << " eta=" << row.eta << ": "
            << row.failures << " replication(s) failed; cell flagged";
        log_line(quiet, msg.str());
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string format_row(const SweepRow& r) {
  std::ostringstream out;
  out << fmt(r.zeta) << ',' << fmt(r.eta) << ',' << fmt(r.alpha) << ',' << r.n
      << ',' << r.p << ',' << r.reps << ',' << fmt(r.sim_w_mean) << ','
      << fmt(r.sim_w_std) << ',' << fmt(r.sim_v_mean) << ',' << fmt(r.sim_v_std)
      << ',' << fmt(r.sim_cindex_mean) << ',' << fmt(r.sim_cindex_std) << ','
      << fmt(r.sim_ribs_mean) << ',' << fmt(r.sim_ribs_std) << ',' << fmt(r.th_w)
      << ',' << fmt(r.th_v) << ',' << fmt(r.th_cindex) << ',' << fmt(r.th_ribs)
      << ',' << fmt(r.rs_residual) << ',' << r.rs_iterations;
  return out.str();
}

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << kCsvHeader << "\n";
  for (const auto& r : rows) out << format_row(r) << "\n";
}

std::vector<SweepRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError("csv: empty document");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader)
    throw ConfigError("csv: header does not match the sweep schema");
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string cur;
    std::istringstream ls(line);
    while (std::getline(ls, cur, ',')) f.push_back(cur);
    if (f.size() != 20)
      throw ConfigError("csv: expected 20 fields, got " +
                        std::to_string(f.size()));
    SweepRow r;
    r.zeta = std::stod(f[0]);
    r.eta = std::stod(f[1]);
    r.alpha = std::stod(f[2]);
    r.n = std::stoi(f[3]);
    r.p = std::stoi(f[4]);
    r.reps = std::stoi(f[5]);
    r.sim_w_mean = std::stod(f[6]);
    r.sim_w_std = std::stod(f[7]);
    r.sim_v_mean = std::stod(f[8]);
    r.sim_v_std = std::stod(f[9]);
    r.sim_cindex_mean = std::stod(f[10]);
    r.sim_cindex_std = std::stod(f[11]);
    r.sim_ribs_mean = std::stod(f[12]);
    r.sim_ribs_std = std::stod(f[13]);
    r.th_w = std::stod(f[14]);
    r.th_v = std::stod(f[15]);
    r.th_cindex = std::stod(f[16]);
    r.th_ribs = std::stod(f[17]);
    r.rs_residual = std::stod(f[18]);
    r.rs_iterations = std::stoi(f[19]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace hdsa
