#pragma once

#include <Eigen/Core>

#include "hdsa/datagen.hpp"
#include "hdsa/fit.hpp"
#include "hdsa/hazard.hpp"
#include "hdsa/rs.hpp"

namespace hdsa {

/// Cohort scored for discrimination: higher score = riskier (shorter
/// expected survival).
struct ScoredCohort {
  Eigen::VectorXd T;
  Eigen::VectorXi delta;
  Eigen::VectorXd score;
};

/// Harrell's concordance index over comparable pairs (i an event, T_j > T_i
/// strictly): the fraction with score_i > score_j, both comparisons strict.
/// Constant scores therefore give 0, a documented convention. Throws
/// UndefinedMetricError when no pair is comparable.
double harrell_c(const ScoredCohort& cohort);

/// Fitted-family survival curve exp(-Lambda(t|omega) e^{lp}).
double survival_curve(const KnotGrid& grid, const Eigen::VectorXd& omega,
                      double lp, double t);

/// True survival curve exp(-Lambda0(t) e^{lp}).
double true_survival(const TrueModel& model, double lp, double t);

/// Uniform grid of `points` time points on [0, t_end].
Eigen::VectorXd uniform_time_grid(double t_end, int points);

/// Population average of the integrated squared error between two survival
/// curve families (rows = subjects, columns = time grid), by composite
/// trapezoid over the grid.
double ibs_ideal(const Eigen::MatrixXd& s_est, const Eigen::MatrixXd& s_true,
                 const Eigen::VectorXd& tgrid);

/// Ratio of integrated squared errors of a covariate model and a
/// covariate-free null against the truth; < 1 means the model beats the
/// null. The null curve is one row (it does not depend on covariates).
double r_ibs(const Eigen::MatrixXd& s_est, const Eigen::VectorXd& s_null,
             const Eigen::MatrixXd& s_true, const Eigen::VectorXd& tgrid);

struct MetricReport {
  double cindex = 0.0;
  double ribs = 0.0;
};

/// Number of points of the integration grid on [0, censor_hi]; drives the
/// trapezoid error below 1e-6 for these smooth curve families.
inline constexpr int kIbsGridPoints = 301;

/// Asymptotic (theory-side) metrics at a solved saddle point: draws a fresh
/// population, scores it with w* Z0 + v* Q, builds fitted curves from
/// omega*, true curves from the latent predictor, and a null curve from the
/// covariate-free population fit at the solution's alpha.
MetricReport theoretical_metrics(const RSSolution& sol, const TrueModel& model,
                                 const KnotGrid& grid, int m, Rng& rng);

/// Test-set metrics of a fitted model on a fresh cohort: scores X beta_hat,
/// fitted curves from (omega_hat, scores), true curves from the cohort's
/// latent predictors, null curve from the training-data covariate-free fit.
MetricReport empirical_test_metrics(const FitResult& fit,
                                    const Eigen::VectorXd& omega_null,
                                    const TrueModel& model,
                                    const KnotGrid& grid, const Dataset& test);

/// Convenience overload that generates the fresh test cohort (sharing the
/// training beta0) of size n_test from the given stream.
MetricReport empirical_test_metrics(const FitResult& fit,
                                    const Eigen::VectorXd& omega_null,
                                    const TrueModel& model,
                                    const KnotGrid& grid,
                                    const Eigen::VectorXd& beta0, int n_test,
                                    Rng& rng);

}  // namespace hdsa
