#include "hdsa/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "hdsa/config.hpp"
#include "hdsa/datagen.hpp"
#include "hdsa/errors.hpp"
#include "hdsa/fit.hpp"
#include "hdsa/metrics.hpp"
#include "hdsa/rs.hpp"
#include "hdsa/svg_plot.hpp"
#include "hdsa/sweep.hpp"

namespace hdsa {

namespace {

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  bool quiet = false;
};

ExperimentConfig resolve_config(const CommonOpts& opts) {
  ExperimentConfig cfg =
      opts.config_path.empty() ? ExperimentConfig{} : load_config(opts.config_path);
  if (opts.seed) cfg.seed = *opts.seed;
  cfg.validate();
  return cfg;
}

TrueModel model_from(const ExperimentConfig& cfg) {
  TrueModel m = TrueModel::log_logistic();
  m.beta0_norm = cfg.beta0_norm;
  m.censor_lo = cfg.censor_lo;
  m.censor_hi = cfg.censor_hi;
  return m;
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "'");
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int cmd_gen(const CommonOpts& opts, int n_override, double zeta) {
  ExperimentConfig cfg = resolve_config(opts);
  if (n_override > 0) cfg.n = n_override;
  const int p = cfg.p_for(zeta);
  Rng rng(derive_stream(cfg.seed, {label_hash("dataset"), bits_of(zeta), 0}));
  const Dataset data = generate_dataset(cfg.n, p, model_from(cfg), rng);
  ensure_out_dir(opts.out_dir);
  const std::string path = opts.out_dir + "/dataset.csv";
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  write_dataset_csv(data, out);
  if (!opts.quiet)
    std::cerr << "[gen] wrote " << cfg.n << " x " << p << " dataset to " << path
              << "\n";
  return 0;
}

int cmd_fit(const CommonOpts& opts, double zeta, std::optional<double> eta) {
  const ExperimentConfig cfg = resolve_config(opts);
  const double eta_use = eta ? *eta : cfg.etas().front();
  const TrueModel model = model_from(cfg);
  const KnotGrid grid = KnotGrid::equispaced(cfg.censor_hi, cfg.knot_count);
  Rng rng(derive_stream(cfg.seed, {label_hash("dataset"), bits_of(zeta), 0}));
  const Dataset data = generate_dataset(cfg.n, cfg.p_for(zeta), model, rng);
  const FitResult fr =
      fit(data, grid, {eta_use, cfg.alpha, cfg.grad_tol, cfg.fit_max_iter});
  std::cout << "zeta: " << g17(zeta) << "\neta: " << g17(eta_use)
            << "\nalpha: " << g17(cfg.alpha) << "\nobjective: " << g17(fr.objective)
            << "\ngrad_norm: " << g17(fr.grad_norm)
            << "\niterations: " << fr.iterations << "\nw_hat: " << g17(fr.w_hat)
            << "\nv_hat: " << g17(fr.v_hat) << "\nomega_hat:";
  for (Eigen::Index k = 0; k < fr.omega_hat.size(); ++k)
    std::cout << ' ' << g17(fr.omega_hat[k]);
  std::cout << "\n";
  return 0;
}

int cmd_rs(const CommonOpts& opts, double zeta, std::optional<double> eta) {
  const ExperimentConfig cfg = resolve_config(opts);
  const double eta_use = eta ? *eta : cfg.etas().front();
  const TrueModel model = model_from(cfg);
  const KnotGrid grid = KnotGrid::equispaced(cfg.censor_hi, cfg.knot_count);
  Rng rng(derive_stream(cfg.seed, {label_hash("rspop"), bits_of(zeta)}));
  const RSPopulation pop = build_population(cfg.population_m, model, grid, rng);
  const RSSolution sol =
      rs_solve(pop, eta_use, cfg.alpha, zeta,
               {cfg.rs_tol, cfg.rs_damping, cfg.rs_max_iter});
  std::cout << "zeta: " << g17(zeta) << "\neta: " << g17(eta_use)
            << "\nconverged: " << (sol.converged ? "true" : "false")
            << "\niterations: " << sol.iterations << "\nw: " << g17(sol.state.w)
            << "\nv: " << g17(sol.state.v) << "\nnu: " << g17(sol.state.nu)
            << "\ntau: " << g17(sol.state.tau(zeta))
            << "\nphi: " << g17(sol.state.phi(zeta)) << "\nomega:";
  for (Eigen::Index k = 0; k < sol.state.omega.size(); ++k)
    std::cout << ' ' << g17(sol.state.omega[k]);
  std::cout << "\nresidual_alignment: " << g17(sol.residuals.alignment)
            << "\nresidual_z0_overlap: " << g17(sol.residuals.z0_overlap)
            << "\nresidual_q_overlap: " << g17(sol.residuals.q_overlap)
            << "\nresidual_tau: " << g17(sol.residuals.tau_def)
            << "\nresidual_omega_sup: " << g17(sol.residuals.omega_sup) << "\n";
  if (!sol.converged) {
    std::cerr << "[rs] fixed point did not reach tol " << cfg.rs_tol
              << "; consider a smaller rs_damping\n";
    return 2;
  }
  return 0;
}

int cmd_sweep(const CommonOpts& opts) {
  const ExperimentConfig cfg = resolve_config(opts);
  const auto rows = run_sweep(cfg, opts.quiet);
  ensure_out_dir(opts.out_dir);
  const std::string path = opts.out_dir + "/sweep.csv";
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  write_csv(rows, out);
  if (!opts.quiet) std::cerr << "[sweep] wrote " << path << "\n";
  if (cfg.plots) {
    for (const auto& p : write_sweep_plots(rows, opts.out_dir))
      if (!opts.quiet) std::cerr << "[sweep] wrote " << p << "\n";
  }
  return 0;
}

int cmd_plot(const CommonOpts& opts, const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw ConfigError("plot: cannot open CSV '" + csv_path + "'");
  const auto rows = read_csv(in);
  ensure_out_dir(opts.out_dir);
  for (const auto& p : write_sweep_plots(rows, opts.out_dir))
    if (!opts.quiet) std::cerr << "[plot] wrote " << p << "\n";
  return 0;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args) {
  CLI::App app{
      "Piecewise exponential ridge survival: simulation, saddle-point theory "
      "and prediction metrics"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::uint64_t seed_raw = 0;
  bool seed_set = false;
  app.add_option("--config", opts.config_path, "Config file (flat key = value)");
  auto* seed_opt = app.add_option("--seed", seed_raw, "Master seed override");
  app.add_option("--out", opts.out_dir, "Output directory");
  app.add_flag("--quiet", opts.quiet, "Suppress progress logging");

  int gen_n = 0;
  double gen_zeta = 0.5, fit_zeta = 0.5, rs_zeta = 0.5;
  std::optional<double> fit_eta, rs_eta;
  double fit_eta_raw = 0, rs_eta_raw = 0;
  std::string csv_path = "sweep.csv";

  auto* gen = app.add_subcommand("gen", "Generate one dataset and dump it as CSV");
  gen->add_option("--n", gen_n, "Override the sample size");
  gen->add_option("--zeta", gen_zeta, "Covariate ratio p/n");

  auto* fitc = app.add_subcommand("fit", "Fit one simulated dataset");
  fitc->add_option("--zeta", fit_zeta, "Covariate ratio p/n");
  auto* fit_eta_opt = fitc->add_option("--eta", fit_eta_raw, "Ridge strength on beta");

  auto* rsc = app.add_subcommand("rs", "Solve the saddle-point system for one cell");
  rsc->add_option("--zeta", rs_zeta, "Covariate ratio p/n");
  auto* rs_eta_opt = rsc->add_option("--eta", rs_eta_raw, "Ridge strength on beta");

  auto* sweep = app.add_subcommand("sweep", "Run the full (zeta, eta) grid and write sweep.csv");

  auto* plot = app.add_subcommand("plot", "Render SVG figures from an existing sweep CSV");
  plot->add_option("--csv", csv_path, "Input CSV path");

  // global flags remain valid after the subcommand name
  for (auto* sub : {gen, fitc, rsc, sweep, plot}) sub->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  seed_set = seed_opt->count() > 0;
  if (seed_set) opts.seed = seed_raw;
  if (fit_eta_opt->count() > 0) fit_eta = fit_eta_raw;
  if (rs_eta_opt->count() > 0) rs_eta = rs_eta_raw;

  try {
    if (gen->parsed()) return cmd_gen(opts, gen_n, gen_zeta);
    if (fitc->parsed()) return cmd_fit(opts, fit_zeta, fit_eta);
    if (rsc->parsed()) return cmd_rs(opts, rs_zeta, rs_eta);
    if (sweep->parsed()) return cmd_sweep(opts);
    if (plot->parsed()) return cmd_plot(opts, csv_path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

int cli_dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_dispatch(args);
}

}  // namespace hdsa
