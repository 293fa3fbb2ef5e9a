#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "hdsa/datagen.hpp"
#include "hdsa/hazard.hpp"

namespace hdsa {

struct FitConfig {
  double eta;                ///< ridge strength on beta, > 0
  double alpha;              ///< ridge strength on omega, > 0
  double grad_tol = 1e-8;    ///< convergence threshold on gradient sup-norm
  int max_iter = 500;        ///< Newton iteration cap
};

struct FitResult {
  Eigen::VectorXd beta_hat;
  Eigen::VectorXd omega_hat;
  double objective = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  double w_hat = 0.0;  ///< beta0' beta_hat / |beta0|
  double v_hat = 0.0;  ///< norm of the component of beta_hat orthogonal to beta0
  std::vector<double> objective_trace;  ///< objective at each accepted iterate
};

/// Design pieces of the ridge-penalized negative log-likelihood shared by
/// objective, gradient and Hessian: the n x l occupancy matrix Psi_k(T_i)
/// and, per event, the interval its time falls in. Construction fails with
/// InfeasibleDataError (naming the observation) if any event time lies on a
/// knot or outside the knot range, where the hazard vanishes.
class PexLikelihood {
public:
  PexLikelihood(const Dataset& data, const KnotGrid& grid);

  double objective(const Eigen::VectorXd& beta, const Eigen::VectorXd& omega,
                   const FitConfig& cfg) const;
  void gradient(const Eigen::VectorXd& beta, const Eigen::VectorXd& omega,
                const FitConfig& cfg, Eigen::VectorXd& grad_beta,
                Eigen::VectorXd& grad_omega) const;

  const Eigen::MatrixXd& occupancy() const { return occupancy_; }
  const Dataset& data() const { return *data_; }
  int intervals() const { return static_cast<int>(occupancy_.cols()); }

  /// Mean occupancy <Psi_k(T)> and event share <delta psi_k(T)> per interval.
  const Eigen::VectorXd& mean_occupancy() const { return mean_occupancy_; }
  const Eigen::VectorXd& event_share() const { return event_share_; }

private:
  friend FitResult fit(const PexLikelihood&, const FitConfig&,
                       const Eigen::VectorXd*, const Eigen::VectorXd*);

  const Dataset* data_;
  Eigen::MatrixXd occupancy_;       // n x l
  Eigen::VectorXi event_interval_;  // 0-based interval of T_i if event, else -1
  Eigen::VectorXd event_share_;     // l
  Eigen::VectorXd mean_occupancy_;  // l
};

/// Penalized negative log-likelihood
///   (1/n) sum_i [Lambda(T_i|omega) e^{X_i beta} - delta_i X_i beta
///                - delta_i log lambda(T_i|omega)]
///   + (eta/2) |beta|^2 + (alpha/2) |omega|^2.
double objective(const Eigen::VectorXd& beta, const Eigen::VectorXd& omega,
                 const Dataset& data, const KnotGrid& grid,
                 const FitConfig& cfg);

/// Analytic gradient of the objective, as (d/dbeta, d/domega).
std::pair<Eigen::VectorXd, Eigen::VectorXd> gradient(
    const Eigen::VectorXd& beta, const Eigen::VectorXd& omega,
    const Dataset& data, const KnotGrid& grid, const FitConfig& cfg);

/// Newton descent with backtracking line search to gradient sup-norm <=
/// grad_tol. The objective is smooth and strongly convex, so the minimizer
/// is unique; cold starts are beta = 0, omega = 0. Throws ConvergenceError
/// (carrying the last iterate) if max_iter is exhausted.
FitResult fit(const PexLikelihood& like, const FitConfig& cfg,
              const Eigen::VectorXd* init_beta = nullptr,
              const Eigen::VectorXd* init_omega = nullptr);

FitResult fit(const Dataset& data, const KnotGrid& grid, const FitConfig& cfg,
              const Eigen::VectorXd* init_beta = nullptr,
              const Eigen::VectorXd* init_omega = nullptr);

/// Overlap statistics (w, v): alignment of beta_hat with beta0 and the norm
/// of the orthogonal remainder; w^2 + v^2 = |beta_hat|^2.
std::pair<double, double> overlaps(const Eigen::VectorXd& beta_hat,
                                   const Eigen::VectorXd& beta0);

/// Covariate-free ridge fit of omega on a dataset: per interval k solves
/// alpha w + e^w <Psi_k(T)> = <delta psi_k(T)> in closed form (Lambert W).
Eigen::VectorXd fit_null_omega(const Dataset& data, const KnotGrid& grid,
                               double alpha);

/// Shared closed-form solver for alpha w + e^w a = b, elementwise.
Eigen::VectorXd ridge_hazard_solve(const Eigen::VectorXd& a,
                                   const Eigen::VectorXd& b, double alpha);

}  // namespace hdsa
