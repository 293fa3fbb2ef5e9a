#pragma once

#include <Eigen/Core>
#include <functional>
#include <iosfwd>

#include "hdsa/rng.hpp"

namespace hdsa {

/// Data-generating truth: baseline cumulative hazard (default log-logistic,
/// Lambda0(t) = log(1 + t^2/2)), the radius of the true coefficient vector,
/// and the uniform censoring window.
struct TrueModel {
  std::function<double(double)> cum_hazard0;
  /// Inverse of cum_hazard0; may be empty, in which case event times are
  /// sampled by monotone root finding on cum_hazard0.
  std::function<double(double)> cum_hazard0_inv;
  double beta0_norm = 1.0;
  double censor_lo = 1.0;
  double censor_hi = 3.0;

  static TrueModel log_logistic();
};

/// One simulated cohort. Immutable after creation.
struct Dataset {
  Eigen::MatrixXd X;      ///< n x p covariates, i.i.d. standard normal
  Eigen::VectorXd T;      ///< observed times, min(event, censor)
  Eigen::VectorXi delta;  ///< 1 = event observed, 0 = censored
  Eigen::VectorXd theta;  ///< latent true linear predictors X beta0
  Eigen::VectorXd beta0;  ///< true coefficients, |beta0| = beta0_norm

  Eigen::Index n() const { return T.size(); }
  Eigen::Index p() const { return X.cols(); }
};

/// Uniform draw from the sphere of the given radius in R^p.
Eigen::VectorXd sample_beta0(int p, Rng& rng, double radius = 1.0);

/// Event time by inverse-survival sampling of S0(t|theta) = exp(-Lambda0(t)
/// e^theta) at the uniform draw u in (0,1). For the default model this is
/// t = sqrt(2 (u^{-e^{-theta}} - 1)).
double sample_event_time(const TrueModel& model, double theta, double u);

/// Censoring time censor_lo + (censor_hi - censor_lo) u, u in [0,1].
double sample_censor(const TrueModel& model, double u);

/// Full cohort: X ~ N(0, I), beta0 on the sphere, T = min(Y, C),
/// delta = 1[Y < C]. Draw order (fixed for reproducibility): beta0, then X
/// row by row, then per observation the event and censoring uniforms.
Dataset generate_dataset(int n, int p, const TrueModel& model, Rng& rng);

/// Same, but with a caller-supplied beta0 (fresh test cohorts must share the
/// training truth). Draw order: X row by row, then per-observation uniforms.
Dataset generate_dataset(int n, const Eigen::VectorXd& beta0,
                         const TrueModel& model, Rng& rng);

/// Text dump, header `id,time,status,x1..xp`, status 1 = event 0 = censored.
void write_dataset_csv(const Dataset& data, std::ostream& out);

}  // namespace hdsa
