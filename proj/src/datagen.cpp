#include "hdsa/datagen.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace hdsa {

TrueModel TrueModel::log_logistic() {
  TrueModel m;
  m.cum_hazard0 = [](double t) { return std::log1p(0.5 * t * t); };
  m.cum_hazard0_inv = [](double s) { return std::sqrt(2.0 * std::expm1(s)); };
  return m;
}

Eigen::VectorXd sample_beta0(int p, Rng& rng, double radius) {
  if (p < 1) throw std::domain_error("sample_beta0: p must be >= 1");
  Eigen::VectorXd b(p);
  double norm2 = 0.0;
  do {
    for (int j = 0; j < p; ++j) b[j] = rng.normal();
    norm2 = b.squaredNorm();
  } while (norm2 == 0.0);
  return b * (radius / std::sqrt(norm2));
}

namespace {

// Monotone root solve of cum_hazard0(t) = s on t >= 0; used when the model
// carries no closed-form inverse.
double invert_cum_hazard(const TrueModel& model, double s) {
  if (s <= 0.0) return 0.0;
  double hi = 1.0;
  while (model.cum_hazard0(hi) < s) {
    hi *= 2.0;
    if (hi > 1e300) return std::numeric_limits<double>::infinity();
  }
  double lo = (hi > 1.0) ? hi * 0.5 : 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (model.cum_hazard0(mid) < s)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-15 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double sample_event_time(const TrueModel& model, double theta, double u) {
  if (!(u > 0.0 && u < 1.0))
    throw std::domain_error("sample_event_time: u must lie in (0,1)");
  // S0(t|theta) = u  <=>  Lambda0(t) = -log(u) e^{-theta}
  const double s = -std::log(u) * std::exp(-theta);
  if (model.cum_hazard0_inv) return model.cum_hazard0_inv(s);
  return invert_cum_hazard(model, s);
}

double sample_censor(const TrueModel& model, double u) {
  return model.censor_lo + (model.censor_hi - model.censor_lo) * u;
}

namespace {

Dataset generate_with_beta0(int n, Eigen::VectorXd beta0,
                            const TrueModel& model, Rng& rng) {
  const auto p = beta0.size();
  Dataset d;
  d.beta0 = std::move(beta0);
  d.X.resize(n, p);
  for (int i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) d.X(i, j) = rng.normal();
  d.theta = (p > 0) ? Eigen::VectorXd(d.X * d.beta0)
                    : Eigen::VectorXd::Zero(n);
  d.T.resize(n);
  d.delta.resize(n);
  for (int i = 0; i < n; ++i) {
    const double y = sample_event_time(model, d.theta[i], rng.uniform_open());
    const double c = sample_censor(model, rng.uniform());
    d.T[i] = std::min(y, c);
    d.delta[i] = (y < c) ? 1 : 0;
  }
  return d;
}

}  // namespace

Dataset generate_dataset(int n, int p, const TrueModel& model, Rng& rng) {
  if (n < 1) throw std::domain_error("generate_dataset: n must be >= 1");
  if (p < 0) throw std::domain_error("generate_dataset: p must be >= 0");
  Eigen::VectorXd beta0 = (p > 0) ? sample_beta0(p, rng, model.beta0_norm)
                                  : Eigen::VectorXd(0);
  return generate_with_beta0(n, std::move(beta0), model, rng);
}

Dataset generate_dataset(int n, const Eigen::VectorXd& beta0,
                         const TrueModel& model, Rng& rng) {
  if (n < 1) throw std::domain_error("generate_dataset: n must be >= 1");
  return generate_with_beta0(n, beta0, model, rng);
}

void write_dataset_csv(const Dataset& data, std::ostream& out) {
  out << "id,time,status";
  for (Eigen::Index j = 1; j <= data.p(); ++j) out << ",x" << j;
  out << "\n";
  char buf[32];
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    out << (i + 1);
    std::snprintf(buf, sizeof(buf), "%.17g", data.T[i]);
    out << ',' << buf << ',' << data.delta[i];
    for (Eigen::Index j = 0; j < data.p(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.X(i, j));
      out << ',' << buf;
    }
    out << "\n";
  }
}

}  // namespace hdsa
