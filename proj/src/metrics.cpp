#include "hdsa/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "hdsa/errors.hpp"

namespace hdsa {

double harrell_c(const ScoredCohort& cohort) {
  const auto n = cohort.T.size();
  if (cohort.delta.size() != n || cohort.score.size() != n)
    throw std::invalid_argument("harrell_c: field lengths differ");
  long long comparable = 0, concordant = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (cohort.delta[i] != 1) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (cohort.T[j] > cohort.T[i]) {
        ++comparable;
        if (cohort.score[i] > cohort.score[j]) ++concordant;
      }
    }
  }
  if (comparable == 0)
    throw UndefinedMetricError("harrell_c: no comparable pairs");
  return static_cast<double>(concordant) / static_cast<double>(comparable);
}

double survival_curve(const KnotGrid& grid, const Eigen::VectorXd& omega,
                      double lp, double t) {
  return std::exp(-cum_hazard(grid, omega, t) * std::exp(lp));
}

double true_survival(const TrueModel& model, double lp, double t) {
  return std::exp(-model.cum_hazard0(t) * std::exp(lp));
}

Eigen::VectorXd uniform_time_grid(double t_end, int points) {
  if (!(t_end > 0.0) || points < 2)
    throw std::invalid_argument("uniform_time_grid: bad arguments");
  return Eigen::VectorXd::LinSpaced(points, 0.0, t_end);
}

namespace {

// Trapezoid weights for a (possibly non-uniform) grid.
Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& tgrid) {
  const auto g = tgrid.size();
  if (g < 2) throw std::invalid_argument("trapezoid: need at least 2 points");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(g);
  for (Eigen::Index j = 0; j + 1 < g; ++j) {
    const double h = tgrid[j + 1] - tgrid[j];
    w[j] += 0.5 * h;
    w[j + 1] += 0.5 * h;
  }
  return w;
}

}  // namespace

double ibs_ideal(const Eigen::MatrixXd& s_est, const Eigen::MatrixXd& s_true,
                 const Eigen::VectorXd& tgrid) {
  if (s_est.rows() != s_true.rows() || s_est.cols() != s_true.cols() ||
      s_est.cols() != tgrid.size())
    throw std::invalid_argument("ibs_ideal: shape mismatch");
  const Eigen::VectorXd w = trapezoid_weights(tgrid);
  const Eigen::MatrixXd sq = (s_est - s_true).array().square();
  return (sq * w).mean();  // per-row integrals, averaged over the population
}

double r_ibs(const Eigen::MatrixXd& s_est, const Eigen::VectorXd& s_null,
             const Eigen::MatrixXd& s_true, const Eigen::VectorXd& tgrid) {
  const Eigen::MatrixXd null_mat =
      s_null.transpose().replicate(s_true.rows(), 1);
  const double denom = ibs_ideal(null_mat, s_true, tgrid);
  if (denom <= 0.0)
    throw UndefinedMetricError("r_ibs: null model matches the truth exactly");
  return ibs_ideal(s_est, s_true, tgrid) / denom;
}

namespace {

Eigen::MatrixXd fitted_curves(const KnotGrid& grid,
                              const Eigen::VectorXd& omega,
                              const Eigen::VectorXd& lps,
                              const Eigen::VectorXd& tgrid) {
  Eigen::VectorXd lam(tgrid.size());
  for (Eigen::Index j = 0; j < tgrid.size(); ++j)
    lam[j] = cum_hazard(grid, omega, tgrid[j]);
  return (-(lps.array().exp().matrix() * lam.transpose()).array()).exp();
}

Eigen::MatrixXd truth_curves(const TrueModel& model, const Eigen::VectorXd& lps,
                             const Eigen::VectorXd& tgrid) {
  Eigen::VectorXd lam(tgrid.size());
  for (Eigen::Index j = 0; j < tgrid.size(); ++j)
    lam[j] = model.cum_hazard0(tgrid[j]);
  return (-(lps.array().exp().matrix() * lam.transpose()).array()).exp();
}

}  // namespace

MetricReport theoretical_metrics(const RSSolution& sol, const TrueModel& model,
                                 const KnotGrid& grid, int m, Rng& rng) {
  if (!sol.converged)
    throw std::invalid_argument("theoretical_metrics: unconverged solution");
  const RSPopulation pop = build_population(m, model, grid, rng);
  const Eigen::VectorXd scores = sol.state.w * pop.z0 + sol.state.v * pop.q;
  const Eigen::VectorXd tgrid =
      uniform_time_grid(model.censor_hi, kIbsGridPoints);

  MetricReport rep;
  rep.cindex = harrell_c({pop.T, pop.delta, scores});

  const Eigen::MatrixXd s_est = fitted_curves(grid, sol.state.omega, scores, tgrid);
  const Eigen::VectorXd latent = model.beta0_norm * pop.z0;
  const Eigen::MatrixXd s_true = truth_curves(model, latent, tgrid);
  const Eigen::VectorXd omega_null = null_omega(pop, sol.alpha);
  const Eigen::VectorXd s_null =
      fitted_curves(grid, omega_null, Eigen::VectorXd::Zero(1), tgrid)
          .row(0)
          .transpose();
  rep.ribs = r_ibs(s_est, s_null, s_true, tgrid);
  return rep;
}

MetricReport empirical_test_metrics(const FitResult& fit,
                                    const Eigen::VectorXd& omega_null,
                                    const TrueModel& model,
                                    const KnotGrid& grid, const Dataset& test) {
  const Eigen::VectorXd scores =
      (test.p() > 0) ? Eigen::VectorXd(test.X * fit.beta_hat)
                     : Eigen::VectorXd::Zero(test.n());
  const Eigen::VectorXd tgrid =
      uniform_time_grid(model.censor_hi, kIbsGridPoints);

  MetricReport rep;
  rep.cindex = harrell_c({test.T, test.delta, scores});

  const Eigen::MatrixXd s_est = fitted_curves(grid, fit.omega_hat, scores, tgrid);
  const Eigen::MatrixXd s_true = truth_curves(model, test.theta, tgrid);
  const Eigen::VectorXd s_null =
      fitted_curves(grid, omega_null, Eigen::VectorXd::Zero(1), tgrid)
          .row(0)
          .transpose();
  rep.ribs = r_ibs(s_est, s_null, s_true, tgrid);
  return rep;
}

MetricReport empirical_test_metrics(const FitResult& fit,
                                    const Eigen::VectorXd& omega_null,
                                    const TrueModel& model,
                                    const KnotGrid& grid,
                                    const Eigen::VectorXd& beta0, int n_test,
                                    Rng& rng) {
  const Dataset test = generate_dataset(n_test, beta0, model, rng);
  return empirical_test_metrics(fit, omega_null, model, grid, test);
}

}  // namespace hdsa
