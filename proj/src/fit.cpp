#include "hdsa/fit.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hdsa/errors.hpp"
#include "hdsa/scalar_ops.hpp"

namespace hdsa {

PexLikelihood::PexLikelihood(const Dataset& data, const KnotGrid& grid)
    : data_(&data) {
  const auto n = data.n();
  const int l = grid.intervals();
  occupancy_.resize(n, l);
  event_interval_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    occupancy_.row(i) = occupancy_row(grid, data.T[i]).transpose();
    event_interval_[i] = (data.delta[i] == 1) ? grid.interval_of(data.T[i]) : -1;
    if (data.delta[i] == 1 && event_interval_[i] < 0) {
      std::ostringstream msg;
      msg << "event time T[" << i << "] = " << data.T[i]
          << " lies on a knot or outside the knot range; the hazard vanishes "
             "there and the log-likelihood is -inf";
      throw InfeasibleDataError(msg.str(), static_cast<long>(i));
    }
  }
  mean_occupancy_ = occupancy_.colwise().mean();
  event_share_ = Eigen::VectorXd::Zero(l);
  for (Eigen::Index i = 0; i < n; ++i)
    if (event_interval_[i] >= 0) event_share_[event_interval_[i]] += 1.0;
  event_share_ /= static_cast<double>(n);
}

namespace {

void check_cfg(const FitConfig& cfg) {
  if (!(cfg.eta > 0.0) || !(cfg.alpha > 0.0))
    throw std::invalid_argument("FitConfig: eta and alpha must be > 0");
}

// Lambda_i e^{x_i} with the 0 * exp(large) = NaN case pinned to 0.
inline Eigen::ArrayXd scaled_hazard(const Eigen::ArrayXd& lam,
                                    const Eigen::ArrayXd& ex) {
  return (lam == 0.0).select(Eigen::ArrayXd::Zero(lam.size()), lam * ex);
}

}  // namespace

double PexLikelihood::objective(const Eigen::VectorXd& beta,
                                const Eigen::VectorXd& omega,
                                const FitConfig& cfg) const {
  check_cfg(cfg);
  if (beta.size() != data_->p() || omega.size() != occupancy_.cols())
    throw std::invalid_argument("objective: parameter dimension mismatch");
  const auto n = data_->n();
  const Eigen::VectorXd x = (beta.size() > 0)
                                ? Eigen::VectorXd(data_->X * beta)
                                : Eigen::VectorXd::Zero(n);
  const Eigen::ArrayXd lam = (occupancy_ * omega.array().exp().matrix()).array();
  const Eigen::ArrayXd ex = x.array().exp();
  double acc = scaled_hazard(lam, ex).sum();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (event_interval_[i] >= 0) acc -= x[i] + omega[event_interval_[i]];
  }
  return acc / static_cast<double>(n) + 0.5 * cfg.eta * beta.squaredNorm() +
         0.5 * cfg.alpha * omega.squaredNorm();
}

void PexLikelihood::gradient(const Eigen::VectorXd& beta,
                             const Eigen::VectorXd& omega,
                             const FitConfig& cfg, Eigen::VectorXd& grad_beta,
                             Eigen::VectorXd& grad_omega) const {
  check_cfg(cfg);
  if (beta.size() != data_->p() || omega.size() != occupancy_.cols())
    throw std::invalid_argument("gradient: parameter dimension mismatch");
  const auto n = data_->n();
  const double inv_n = 1.0 / static_cast<double>(n);
  const Eigen::VectorXd x = (beta.size() > 0)
                                ? Eigen::VectorXd(data_->X * beta)
                                : Eigen::VectorXd::Zero(n);
  const Eigen::ArrayXd eo = omega.array().exp();
  const Eigen::ArrayXd lam = (occupancy_ * eo.matrix()).array();
  const Eigen::ArrayXd ex = x.array().exp();
  Eigen::ArrayXd resid = scaled_hazard(lam, ex);  // Lambda_i e^{x_i} - delta_i
  for (Eigen::Index i = 0; i < n; ++i)
    if (event_interval_[i] >= 0) resid[i] -= 1.0;

  grad_beta = (beta.size() > 0)
                  ? Eigen::VectorXd(data_->X.transpose() * resid.matrix() * inv_n +
                                    cfg.eta * beta)
                  : Eigen::VectorXd(0);
  grad_omega = (eo * (occupancy_.transpose() * ex.matrix()).array() * inv_n -
                event_share_.array() + cfg.alpha * omega.array())
                   .matrix();
}

double objective(const Eigen::VectorXd& beta, const Eigen::VectorXd& omega,
                 const Dataset& data, const KnotGrid& grid,
                 const FitConfig& cfg) {
  return PexLikelihood(data, grid).objective(beta, omega, cfg);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> gradient(
    const Eigen::VectorXd& beta, const Eigen::VectorXd& omega,
    const Dataset& data, const KnotGrid& grid, const FitConfig& cfg) {
  Eigen::VectorXd gb, go;
  PexLikelihood(data, grid).gradient(beta, omega, cfg, gb, go);
  return {std::move(gb), std::move(go)};
}

FitResult fit(const PexLikelihood& like, const FitConfig& cfg,
              const Eigen::VectorXd* init_beta,
              const Eigen::VectorXd* init_omega) {
  check_cfg(cfg);
  const Dataset& data = like.data();
  const auto n = data.n();
  const auto p = data.p();
  const int l = like.intervals();
  const double inv_n = 1.0 / static_cast<double>(n);

  Eigen::VectorXd beta =
      init_beta ? *init_beta : Eigen::VectorXd::Zero(p);
  Eigen::VectorXd omega =
      init_omega ? *init_omega : Eigen::VectorXd::Zero(l);
  if (beta.size() != p || omega.size() != l)
    throw std::invalid_argument("fit: warm start has wrong dimensions");

  const Eigen::MatrixXd& Psi = like.occupancy();
  Eigen::VectorXd gb, go;
  Eigen::VectorXd grad(p + l);
  Eigen::MatrixXd hess(p + l, p + l);
  Eigen::MatrixXd scaled_X(n, p);

  FitResult res;
  double f = like.objective(beta, omega, cfg);
  res.objective_trace.push_back(f);

  for (int iter = 0;; ++iter) {
    like.gradient(beta, omega, cfg, gb, go);
    grad.head(p) = gb;
    grad.tail(l) = go;
    const double gnorm = grad.lpNorm<Eigen::Infinity>();
    if (gnorm <= cfg.grad_tol) {
      res.beta_hat = beta;
      res.omega_hat = omega;
      res.objective = f;
      res.grad_norm = gnorm;
      res.iterations = iter;
      if (p > 0 && data.beta0.size() == p && data.beta0.norm() > 0.0) {
        auto wv = overlaps(beta, data.beta0);
        res.w_hat = wv.first;
        res.v_hat = wv.second;
      }
      return res;
    }
    if (iter >= cfg.max_iter) {
      std::ostringstream msg;
      msg << "fit: no convergence after " << iter
          << " iterations, gradient sup-norm " << gnorm;
      throw ConvergenceError(msg.str(), beta, omega, gnorm, iter);
    }

    // Newton system. The omega block is diagonal, the beta block is a ridge
    // Gram matrix, the cross block has one rank-n product per interval.
    const Eigen::VectorXd x = (p > 0) ? Eigen::VectorXd(data.X * beta)
                                      : Eigen::VectorXd::Zero(n);
    const Eigen::ArrayXd ex = x.array().exp();
    const Eigen::ArrayXd eo = omega.array().exp();
    const Eigen::ArrayXd lam = (Psi * eo.matrix()).array();
    const Eigen::ArrayXd s = scaled_hazard(lam, ex);  // Lambda_i e^{x_i}

    hess.setZero();
    if (p > 0) {
      scaled_X = s.sqrt().matrix().asDiagonal() * data.X;
      hess.topLeftCorner(p, p).selfadjointView<Eigen::Lower>().rankUpdate(
          scaled_X.transpose(), inv_n);
      hess.topLeftCorner(p, p).triangularView<Eigen::StrictlyUpper>() =
          hess.topLeftCorner(p, p).transpose();
      hess.topLeftCorner(p, p).diagonal().array() += cfg.eta;
      for (int k = 0; k < l; ++k) {
        hess.block(0, p + k, p, 1) =
            data.X.transpose() * (ex * Psi.col(k).array()).matrix() *
            (eo[k] * inv_n);
      }
      hess.bottomLeftCorner(l, p) = hess.topRightCorner(p, l).transpose();
    }
    hess.bottomRightCorner(l, l).diagonal() =
        (eo * (Psi.transpose() * ex.matrix()).array() * inv_n + cfg.alpha)
            .matrix();

    Eigen::LLT<Eigen::MatrixXd> llt(hess);
    if (llt.info() != Eigen::Success) {
      // Numerically indefinite despite convexity: fall back to a damped system.
      hess.diagonal().array() += 1e-8 * (1.0 + hess.diagonal().maxCoeff());
      llt.compute(hess);
    }
    const Eigen::VectorXd step = llt.solve(-grad);

    // Backtracking Armijo line search; the objective decreases at every
    // accepted iterate.
    const double slope = grad.dot(step);
    double t = 1.0;
    double f_new;
    Eigen::VectorXd beta_new, omega_new;
    for (int ls = 0;; ++ls) {
      beta_new = beta + t * step.head(p);
      omega_new = omega + t * step.tail(l);
      f_new = like.objective(beta_new, omega_new, cfg);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * t * slope) break;
      t *= 0.5;
      if (ls >= 60) {
        std::ostringstream msg;
        msg << "fit: line search failed at iteration " << iter;
        throw ConvergenceError(msg.str(), beta, omega, gnorm, iter);
      }
    }
    beta.swap(beta_new);
    omega.swap(omega_new);
    f = f_new;
    res.objective_trace.push_back(f);
  }
}

FitResult fit(const Dataset& data, const KnotGrid& grid, const FitConfig& cfg,
              const Eigen::VectorXd* init_beta,
              const Eigen::VectorXd* init_omega) {
  PexLikelihood like(data, grid);
  return fit(like, cfg, init_beta, init_omega);
}

std::pair<double, double> overlaps(const Eigen::VectorXd& beta_hat,
                                   const Eigen::VectorXd& beta0) {
  const double norm0 = beta0.norm();
  if (!(norm0 > 0.0)) throw std::domain_error("overlaps: beta0 must be nonzero");
  if (beta_hat.size() != beta0.size())
    throw std::invalid_argument("overlaps: dimension mismatch");
  const double dot = beta0.dot(beta_hat);
  const double w = dot / norm0;
  const double v = (beta_hat - (dot / (norm0 * norm0)) * beta0).norm();
  return {w, v};
}

Eigen::VectorXd ridge_hazard_solve(const Eigen::VectorXd& a,
                                   const Eigen::VectorXd& b, double alpha) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("ridge_hazard_solve: alpha must be > 0");
  Eigen::VectorXd w(a.size());
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (a[k] == 0.0) {
      w[k] = b[k] / alpha;
      continue;
    }
    // alpha w + e^w a = b  =>  w = b/alpha - W0((a/alpha) e^{b/alpha})
    const double s = std::log(a[k]) - std::log(alpha) + b[k] / alpha;
    w[k] = b[k] / alpha - lambert_w0_exp(s);
  }
  return w;
}

Eigen::VectorXd fit_null_omega(const Dataset& data, const KnotGrid& grid,
                               double alpha) {
  PexLikelihood like(data, grid);
  return ridge_hazard_solve(like.mean_occupancy(), like.event_share(), alpha);
}

}  // namespace hdsa
