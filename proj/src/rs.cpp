#include "hdsa/rs.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hdsa/errors.hpp"
#include "hdsa/fit.hpp"
#include "hdsa/scalar_ops.hpp"

namespace hdsa {

double RSState::tau(double zeta) const { return v * std::sqrt(zeta); }
double RSState::phi(double zeta) const { return tau(zeta) / nu; }

double RSResiduals::max() const {
  double m = alignment;
  m = std::max(m, z0_overlap);
  m = std::max(m, q_overlap);
  m = std::max(m, tau_def);
  m = std::max(m, omega_sup);
  return m;
}

RSPopulation build_population(int m, const TrueModel& model,
                              const KnotGrid& grid, Rng& rng) {
  if (m < 2) throw std::domain_error("build_population: m must be >= 2");
  RSPopulation pop;
  pop.z0.resize(m);
  pop.q.resize(m);
  for (int i = 0; i < m; ++i) pop.z0[i] = rng.normal();
  for (int i = 0; i < m; ++i) pop.q[i] = rng.normal();

  // Moment matching (see the struct docs): mean 0, unit second moment,
  // exactly orthogonal pair.
  pop.z0.array() -= pop.z0.mean();
  pop.z0 /= std::sqrt(pop.z0.squaredNorm() / m);
  pop.q.array() -= pop.q.mean();
  pop.q -= (pop.q.dot(pop.z0) / pop.z0.squaredNorm()) * pop.z0;
  pop.q /= std::sqrt(pop.q.squaredNorm() / m);

  pop.T.resize(m);
  pop.delta.resize(m);
  for (int i = 0; i < m; ++i) {
    const double theta = model.beta0_norm * pop.z0[i];
    const double y = sample_event_time(model, theta, rng.uniform_open());
    const double c = sample_censor(model, rng.uniform());
    pop.T[i] = std::min(y, c);
    pop.delta[i] = (y < c) ? 1 : 0;
  }

  const int l = grid.intervals();
  pop.occupancy.resize(m, l);
  pop.event_interval.resize(m);
  pop.event_share = Eigen::VectorXd::Zero(l);
  for (int i = 0; i < m; ++i) {
    pop.occupancy.row(i) = occupancy_row(grid, pop.T[i]).transpose();
    pop.event_interval[i] =
        (pop.delta[i] == 1) ? grid.interval_of(pop.T[i]) : -1;
    if (pop.event_interval[i] >= 0) pop.event_share[pop.event_interval[i]] += 1.0;
  }
  pop.event_share /= static_cast<double>(m);
  pop.mean_occupancy = pop.occupancy.colwise().mean();
  return pop;
}

double xi_hat_member(const RSState& state, const RSPopulation& pop,
                     Eigen::Index i) {
  const double lam = pop.occupancy.row(i) * state.omega.array().exp().matrix();
  const double x = state.w * pop.z0[i] + state.v * pop.q[i];
  return prox_g({x, state.nu, lam, pop.delta[i]});
}

Eigen::VectorXd xi_hat(const RSState& state, const RSPopulation& pop) {
  const auto m = pop.size();
  const Eigen::VectorXd lam = pop.occupancy * state.omega.array().exp().matrix();
  Eigen::VectorXd xi(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double x = state.w * pop.z0[i] + state.v * pop.q[i];
    xi[i] = prox_g({x, state.nu, lam[i], pop.delta[i]});
  }
  return xi;
}

namespace {

// Everything one sweep needs, computed from a single prox pass.
struct SweepStats {
  double z0_xi = 0.0;   // <Z0 xi>
  double q_xi = 0.0;    // <Q xi>
  double disp2 = 0.0;   // <(xi - x)^2>
  Eigen::VectorXd occ_exi;  // <Psi_k e^xi> per interval
};

SweepStats compute_sweep(const RSState& state, const RSPopulation& pop) {
  const auto m = pop.size();
  const double inv_m = 1.0 / static_cast<double>(m);
  const Eigen::VectorXd lam = pop.occupancy * state.omega.array().exp().matrix();
  SweepStats st;
  Eigen::VectorXd exi(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double x = state.w * pop.z0[i] + state.v * pop.q[i];
    const double xi = prox_g({x, state.nu, lam[i], pop.delta[i]});
    const double disp = xi - x;
    st.z0_xi += pop.z0[i] * xi;
    st.q_xi += pop.q[i] * xi;
    st.disp2 += disp * disp;
    exi[i] = std::exp(xi);
  }
  st.z0_xi *= inv_m;
  st.q_xi *= inv_m;
  st.disp2 *= inv_m;
  st.occ_exi = pop.occupancy.transpose() * exi * inv_m;
  return st;
}

// Root of <Q xi(v)> - v (1 - zeta + eta nu) on v > 0, used when the plain
// update denominator is not positive. Scans a bracket around the current v
// and bisects; falls back to the current v when no sign change is found.
double solve_q_overlap(const RSState& state, const RSPopulation& pop,
                       double eta, double zeta) {
  const double denom = 1.0 - zeta + eta * state.nu;
  auto residual = [&](double v) {
    RSState s = state;
    s.v = v;
    return compute_sweep(s, pop).q_xi - v * denom;
  };
  double lo = std::max(1e-12, state.v * std::pow(2.0, -40));
  double flo = residual(lo);
  double hi = lo;
  double fhi = flo;
  bool bracketed = false;
  for (int k = 0; k < 60; ++k) {
    hi *= 2.0;
    fhi = residual(hi);
    if ((flo <= 0.0) != (fhi <= 0.0)) {
      bracketed = true;
      break;
    }
    lo = hi;
    flo = fhi;
  }
  if (!bracketed) return state.v;
  for (int it = 0; it < 200 && (hi - lo) > 1e-14 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = residual(mid);
    if ((flo <= 0.0) == (fmid <= 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void check_cell(double eta, double alpha, double zeta) {
  if (!(eta > 0.0) || !(alpha > 0.0) || !(zeta > 0.0))
    throw std::invalid_argument("rs: eta, alpha, zeta must be > 0");
}

}  // namespace

RSState rs_update(const RSState& state, const RSPopulation& pop, double eta,
                  double alpha, double zeta, double damping) {
  check_cell(eta, alpha, zeta);
  if (!(damping > 0.0 && damping <= 1.0))
    throw std::invalid_argument("rs_update: damping must lie in (0,1]");
  const SweepStats st = compute_sweep(state, pop);

  const double w_up = st.z0_xi / (1.0 + eta * state.nu);
  const double q_denom = 1.0 - zeta + eta * state.nu;
  const double v_up = (q_denom > 1e-12) ? st.q_xi / q_denom
                                        : solve_q_overlap(state, pop, eta, zeta);
  // <g'(xi)^2> = <(xi - x)^2> / nu^2 by the prox optimality condition.
  const double gp2 = st.disp2 / (state.nu * state.nu);
  const double nu_up = state.v * std::sqrt(zeta) / std::sqrt(gp2);
  const Eigen::VectorXd omega_up =
      ridge_hazard_solve(st.occ_exi, pop.event_share, alpha);

  RSState next;
  next.w = (1.0 - damping) * state.w + damping * w_up;
  next.v = (1.0 - damping) * state.v + damping * v_up;
  next.nu = (1.0 - damping) * state.nu + damping * nu_up;
  next.omega = (1.0 - damping) * state.omega + damping * omega_up;
  return next;
}

RSResiduals rs_residuals(const RSState& state, const RSPopulation& pop,
                         double eta, double alpha, double zeta) {
  check_cell(eta, alpha, zeta);
  const SweepStats st = compute_sweep(state, pop);
  RSResiduals r;
  r.alignment = std::abs(st.disp2 - state.v * state.v * zeta);
  r.z0_overlap = std::abs(state.w * (1.0 + eta * state.nu) - st.z0_xi);
  r.q_overlap = std::abs(state.v * (1.0 - zeta + eta * state.nu) - st.q_xi);
  r.tau_def = 0.0;  // tau is defined as v sqrt(zeta)
  const Eigen::ArrayXd omega_eq = alpha * state.omega.array() +
                                  state.omega.array().exp() * st.occ_exi.array() -
                                  pop.event_share.array();
  r.omega_sup = omega_eq.abs().maxCoeff();
  return r;
}

RSSolution rs_solve(const RSPopulation& pop, double eta, double alpha,
                    double zeta, const RSOptions& opts, const RSState* init) {
  check_cell(eta, alpha, zeta);
  if (!(opts.tol > 0.0)) throw std::invalid_argument("rs_solve: tol must be > 0");

  RSState state;
  if (init) {
    state = *init;
  } else {
    state.omega = null_omega(pop, alpha);
  }
  if (state.omega.size() != pop.intervals())
    throw std::invalid_argument("rs_solve: init omega has wrong length");

  RSSolution sol;
  sol.eta = eta;
  sol.alpha = alpha;
  sol.zeta = zeta;
  for (int iter = 0; iter <= opts.max_iter; ++iter) {
    sol.residuals = rs_residuals(state, pop, eta, alpha, zeta);
    sol.state = state;
    sol.iterations = iter;
    if (sol.residuals.max() <= opts.tol) {
      sol.converged = true;
      return sol;
    }
    if (iter == opts.max_iter) break;
    RSState next = rs_update(state, pop, eta, alpha, zeta, opts.damping);
    if (!std::isfinite(next.w) || !std::isfinite(next.v) ||
        !std::isfinite(next.nu) || !next.omega.allFinite() || !(next.nu > 0.0)) {
      sol.converged = false;  // diverged; last finite state is in sol.state
      return sol;
    }
    state = next;
  }
  sol.converged = false;
  return sol;
}

double surrogate_objective(const RSPopulation& pop,
                           const Eigen::VectorXd& omega, double w, double v,
                           double phi, double tau, double eta, double alpha,
                           double zeta) {
  check_cell(eta, alpha, zeta);
  if (!(tau > 0.0) || !(phi > 0.0))
    throw std::invalid_argument("surrogate_objective: need tau > 0, phi > 0");
  if (omega.size() != pop.intervals())
    throw std::invalid_argument("surrogate_objective: omega length mismatch");
  const double nu = tau / phi;
  const auto m = pop.size();
  const Eigen::VectorXd lam = pop.occupancy * omega.array().exp().matrix();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double x = w * pop.z0[i] + v * pop.q[i];
    acc += moreau_g({x, nu, lam[i], pop.delta[i]});
    if (pop.delta[i] == 1) {
      if (pop.event_interval[i] < 0) {
        std::ostringstream msg;
        msg << "surrogate_objective: event member " << i
            << " has zero hazard at T = " << pop.T[i];
        throw InfeasibleDataError(msg.str(), static_cast<long>(i));
      }
      acc -= omega[pop.event_interval[i]];
    }
  }
  return acc / static_cast<double>(m) + phi * (0.5 * tau - v * std::sqrt(zeta)) +
         0.5 * eta * (v * v + w * w) + 0.5 * alpha * omega.squaredNorm();
}

Eigen::VectorXd null_omega(const RSPopulation& pop, double alpha) {
  return ridge_hazard_solve(pop.mean_occupancy, pop.event_share, alpha);
}

}  // namespace hdsa
