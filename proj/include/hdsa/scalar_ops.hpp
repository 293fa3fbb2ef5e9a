#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hdsa {

namespace detail {

/// Halley iteration for w + log(w) = s, w > 0. Requires a positive initial
/// guess on the right order of magnitude.
inline double halley_wlogw(double w, double s) {
  for (int it = 0; it < 40; ++it) {
    const double f = w + std::log(w) - s;
    const double fp = 1.0 + 1.0 / w;
    const double fpp = -1.0 / (w * w);
    double step = 2.0 * f * fp / (2.0 * fp * fp - f * fpp);
    double next = w - step;
    if (!(next > 0.0)) next = w * 0.5;  // keep the iterate in the domain
    const double delta = std::abs(next - w);
    w = next;
    if (delta <= 1e-15 * (1.0 + std::abs(w))) break;
  }
  return w;
}

}  // namespace detail

/// W0(exp(s)): the real Lambert branch evaluated at exp(s), stable for any s
/// including values far beyond log(DBL_MAX). Solves w + log w = s.
inline double lambert_w0_exp(double s) {
  if (s == -std::numeric_limits<double>::infinity()) return 0.0;
  if (std::isnan(s)) return s;
  if (s == std::numeric_limits<double>::infinity())
    return std::numeric_limits<double>::infinity();
  if (s < -36.75) return std::exp(s);  // W(y) = y to double precision here
  double w;
  if (s <= -2.0) {
    // series W(y) = y - y^2 + (3/2) y^3 - (8/3) y^4, y = e^s <= 0.136
    const double y = std::exp(s);
    w = y * (1.0 + y * (-1.0 + y * (1.5 - (8.0 / 3.0) * y)));
  } else if (s <= 2.0) {
    const double y = std::exp(s);
    const double l = std::log1p(y);
    w = l * (1.0 - std::log1p(l) / (2.0 + l));
  } else {
    w = s - std::log(s);
    w += std::log(s) / (1.0 + w);  // one cheap correction before Halley
  }
  return detail::halley_wlogw(w, s);
}

/// Real branch W0 of the Lambert W function on [0, inf): the w >= 0 with
/// w e^w = y, monotone nondecreasing in y.
inline double lambert_w0(double y) {
  if (std::isnan(y)) return y;
  if (y < 0.0) throw std::domain_error("lambert_w0: negative argument");
  if (y == 0.0) return 0.0;
  return lambert_w0_exp(std::log(y));
}

/// Arguments of the proximal operator / Moreau envelope of
/// g(xi) = Lambda e^xi - delta xi.
struct ProxInputs {
  double x;       ///< prox argument (shifted linear predictor)
  double nu;      ///< envelope parameter, > 0 (tau/phi in the saddle system)
  double Lambda;  ///< cumulative hazard at the observed time, >= 0
  int delta;      ///< event indicator, 0 or 1
};

namespace detail {

inline void check_prox_inputs(const ProxInputs& in) {
  if (!(in.nu > 0.0)) throw std::domain_error("prox: nu must be > 0");
  if (!(in.Lambda >= 0.0)) throw std::domain_error("prox: Lambda must be >= 0");
  if (in.delta != 0 && in.delta != 1)
    throw std::domain_error("prox: delta must be 0 or 1");
}

/// u = W0(nu * Lambda * exp(x + delta*nu)), evaluated in the log domain so
/// large shifted predictors cannot overflow.
inline double prox_w_value(const ProxInputs& in) {
  if (in.Lambda == 0.0) return 0.0;
  const double s = std::log(in.nu) + std::log(in.Lambda) + in.x + in.delta * in.nu;
  return lambert_w0_exp(s);
}

}  // namespace detail

/// prox of g: the unique minimizer of (1/(2 nu)) (xi - x)^2 + g(xi),
/// xi = x + delta*nu - W0(nu*Lambda*e^{x + delta*nu}).
inline double prox_g(const ProxInputs& in) {
  detail::check_prox_inputs(in);
  return in.x + in.delta * in.nu - detail::prox_w_value(in);
}

/// Moreau envelope of g at x: (1/(2 nu)) (xi - x)^2 + g(xi) at the prox
/// point. Uses Lambda e^{xi} = u / nu (the W identity), which stays finite
/// when the direct exponential would overflow.
inline double moreau_g(const ProxInputs& in) {
  detail::check_prox_inputs(in);
  const double u = detail::prox_w_value(in);
  const double disp = in.delta * in.nu - u;  // xi - x
  const double xi = in.x + disp;
  return disp * disp / (2.0 * in.nu) + u / in.nu - in.delta * xi;
}

/// d/dx of the envelope: (x - xi)/nu = u/nu - delta.
inline double moreau_dx(const ProxInputs& in) {
  detail::check_prox_inputs(in);
  return detail::prox_w_value(in) / in.nu - in.delta;
}

/// d/dnu of the envelope: -(xi - x)^2 / (2 nu^2), always <= 0.
inline double moreau_dnu(const ProxInputs& in) {
  detail::check_prox_inputs(in);
  const double disp = in.delta * in.nu - detail::prox_w_value(in);
  return -disp * disp / (2.0 * in.nu * in.nu);
}

/// g'(xi) = Lambda e^xi - delta.
inline double g_prime(double xi, double Lambda, int delta) {
  if (!(Lambda >= 0.0)) throw std::domain_error("g_prime: Lambda must be >= 0");
  return Lambda * std::exp(xi) - delta;
}

}  // namespace hdsa
