#pragma once

#include <Eigen/Core>

#include "hdsa/datagen.hpp"
#include "hdsa/hazard.hpp"
#include "hdsa/rng.hpp"

namespace hdsa {

/// Monte Carlo population over which the saddle-point expectations are
/// approximated, with the hazard-basis quantities precomputed on the grid.
/// The Gaussian pair (Z0, Q) is drawn i.i.d. and then moment-matched so the
/// population satisfies <Z0> = <Q> = <Z0 Q> = 0 and <Z0^2> = <Q^2> = 1
/// exactly; with that, the fixed point of the update map below is exactly a
/// stationary point of the population-averaged surrogate objective. (T,
/// delta) are drawn from the true model at latent predictor |beta0| Z0.
struct RSPopulation {
  Eigen::VectorXd z0;
  Eigen::VectorXd q;
  Eigen::VectorXd T;
  Eigen::VectorXi delta;
  Eigen::MatrixXd occupancy;       ///< m x l, Psi_k(T_i)
  Eigen::VectorXi event_interval;  ///< interval of T_i if event, else -1
  Eigen::VectorXd mean_occupancy;  ///< <Psi_k(T)>
  Eigen::VectorXd event_share;     ///< <delta psi_k(T)>

  Eigen::Index size() const { return T.size(); }
  int intervals() const { return static_cast<int>(occupancy.cols()); }
};

RSPopulation build_population(int m, const TrueModel& model,
                              const KnotGrid& grid, Rng& rng);

/// Free unknowns of the saddle system: (w, v, nu, omega). The remaining
/// saddle scalars are recovered as tau = v sqrt(zeta), phi = tau / nu.
struct RSState {
  double w = 0.5;
  double v = 0.5;
  double nu = 1.0;
  Eigen::VectorXd omega;

  double tau(double zeta) const;
  double phi(double zeta) const;
};

/// Absolute residuals of the five saddle equations at a state; the omega
/// equation reports its sup-norm over intervals. The tau equation holds
/// identically (tau is defined as v sqrt(zeta)).
struct RSResiduals {
  double alignment = 0.0;   ///< v^2 zeta = <(xi - w Z0 - v Q)^2>
  double z0_overlap = 0.0;  ///< w (1 + eta nu) = <Z0 xi>
  double q_overlap = 0.0;   ///< v (1 - zeta + eta nu) = <Q xi>
  double tau_def = 0.0;     ///< tau = v sqrt(zeta)
  double omega_sup = 0.0;   ///< alpha w_k + e^{w_k} <Psi_k e^xi> = <delta psi_k>

  double max() const;
};

struct RSOptions {
  double tol = 1e-8;
  double damping = 0.5;  ///< blend factor gamma in (0, 1]
  int max_iter = 50000;
};

struct RSSolution {
  RSState state;
  RSResiduals residuals;
  int iterations = 0;
  bool converged = false;
  double eta = 0.0, alpha = 0.0, zeta = 0.0;  ///< cell this solves
};

/// prox evaluation for one population member at the given state.
double xi_hat_member(const RSState& state, const RSPopulation& pop,
                     Eigen::Index i);

/// prox evaluations for the whole population.
Eigen::VectorXd xi_hat(const RSState& state, const RSPopulation& pop);

/// One damped sweep of the fixed-point map: each component moves to
/// (1 - gamma) old + gamma update, where the updates are
///   w   <- <Z0 xi> / (1 + eta nu)
///   v   <- <Q xi> / (1 - zeta + eta nu)   (1-D root solve if the
///                                          denominator is not positive)
///   nu  <- v sqrt(zeta) / sqrt(<g'(xi)^2>)
///   w_k <- closed-form Lambert solve of alpha w + e^w <Psi_k e^xi> =
///          <delta psi_k>.
RSState rs_update(const RSState& state, const RSPopulation& pop, double eta,
                  double alpha, double zeta, double damping = 1.0);

RSResiduals rs_residuals(const RSState& state, const RSPopulation& pop,
                         double eta, double alpha, double zeta);

/// Damped fixed-point iteration until every residual is <= tol. The
/// population is fixed across iterations (common random numbers), so the
/// result is deterministic given (pop, init, damping). Non-convergence or a
/// nonfinite sweep yields converged = false with diagnostics rather than a
/// throw; callers may retry with smaller damping.
RSSolution rs_solve(const RSPopulation& pop, double eta, double alpha,
                    double zeta, const RSOptions& opts = {},
                    const RSState* init = nullptr);

/// Population-averaged surrogate objective
///   <M_g(w Z0 + v Q, tau/phi) - delta log lambda(T|omega)>
///   + phi (tau/2 - v sqrt(zeta)) + (eta/2)(v^2 + w^2) + (alpha/2)|omega|^2.
/// Throws InfeasibleDataError if an event member has zero hazard at T.
double surrogate_objective(const RSPopulation& pop,
                           const Eigen::VectorXd& omega, double w, double v,
                           double phi, double tau, double eta, double alpha,
                           double zeta);

/// Covariate-free ridge hazard solve on the population:
/// alpha w_k + e^{w_k} <Psi_k(T)> = <delta psi_k(T)> per interval.
Eigen::VectorXd null_omega(const RSPopulation& pop, double alpha);

}  // namespace hdsa
