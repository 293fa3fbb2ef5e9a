#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hdsa {

/// Knots tau_1 < ... < tau_{l+1} of the piecewise-constant hazard basis.
///
/// Intervals are indexed k = 1..l, interval k being the OPEN interval
/// (tau_k, tau_{k+1}); points sitting exactly on a knot belong to no
/// interval. This is the single place where the indexing and boundary
/// conventions are fixed.
class KnotGrid {
public:
  explicit KnotGrid(Eigen::VectorXd knots) : knots_(std::move(knots)) {
    const auto n = knots_.size();
    if (n < 2) throw std::invalid_argument("KnotGrid: need at least 2 knots");
    if (!(knots_[0] >= 0.0))
      throw std::invalid_argument("KnotGrid: first knot must be >= 0");
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
      if (!(knots_[j] < knots_[j + 1]) || !std::isfinite(knots_[j + 1]))
        throw std::invalid_argument(
            "KnotGrid: knots must be finite and strictly increasing");
    }
  }

  /// count equispaced knots on [0, t_end], i.e. count - 1 intervals.
  static KnotGrid equispaced(double t_end, int count) {
    if (count < 2 || !(t_end > 0.0))
      throw std::invalid_argument("KnotGrid::equispaced: bad arguments");
    return KnotGrid(Eigen::VectorXd::LinSpaced(count, 0.0, t_end));
  }

  int intervals() const noexcept { return static_cast<int>(knots_.size()) - 1; }
  const Eigen::VectorXd& knots() const noexcept { return knots_; }
  double first_knot() const noexcept { return knots_[0]; }
  double last_knot() const noexcept { return knots_[knots_.size() - 1]; }

  /// Lower / upper endpoint of interval k (1-based).
  double lower(int k) const { return knots_[check_k(k) - 1]; }
  double upper(int k) const { return knots_[check_k(k)]; }

  /// Zero-based index of the open interval containing t, or -1 when t lies
  /// on a knot or outside (tau_1, tau_{l+1}).
  int interval_of(double t) const {
    const double* begin = knots_.data();
    const double* end = begin + knots_.size();
    const double* it = std::upper_bound(begin, end, t);
    if (it == begin || it == end) return -1;
    const auto j = static_cast<int>(it - begin);
    return (knots_[j - 1] < t) ? j - 1 : -1;
  }

private:
  int check_k(int k) const {
    if (k < 1 || k > intervals())
      throw std::out_of_range("KnotGrid: interval index out of range");
    return k;
  }

  Eigen::VectorXd knots_;
};

/// psi_k(t) = 1[tau_k < t < tau_{k+1}]  (k is 1-based).
inline double basis_psi(const KnotGrid& grid, int k, double t) {
  return (grid.lower(k) < t && t < grid.upper(k)) ? 1.0 : 0.0;
}

/// Psi_k(t) = 1[t > tau_k] * min(t - tau_k, tau_{k+1} - tau_k): occupancy
/// time of interval k up to t.
inline double basis_Psi(const KnotGrid& grid, int k, double t) {
  const double lo = grid.lower(k);
  if (t <= lo) return 0.0;
  return std::min(t - lo, grid.upper(k) - lo);
}

/// Row vector of all Psi_k(t), k = 1..l.
inline Eigen::VectorXd occupancy_row(const KnotGrid& grid, double t) {
  const int l = grid.intervals();
  Eigen::VectorXd row(l);
  for (int k = 0; k < l; ++k) row[k] = basis_Psi(grid, k + 1, t);
  return row;
}

/// lambda(t | omega) = sum_k psi_k(t) exp(omega_k); zero outside the knot
/// range (in particular for t beyond the last knot).
template <class Derived>
double hazard_rate(const KnotGrid& grid,
                   const Eigen::MatrixBase<Derived>& omega, double t) {
  if (omega.size() != grid.intervals())
    throw std::invalid_argument("hazard_rate: omega length != interval count");
  const int j = grid.interval_of(t);
  return (j < 0) ? 0.0 : std::exp(static_cast<double>(omega[j]));
}

/// Lambda(t | omega) = sum_k Psi_k(t) exp(omega_k); nondecreasing in t and
/// constant past the last knot.
template <class Derived>
double cum_hazard(const KnotGrid& grid,
                  const Eigen::MatrixBase<Derived>& omega, double t) {
  if (omega.size() != grid.intervals())
    throw std::invalid_argument("cum_hazard: omega length != interval count");
  double acc = 0.0;
  for (int k = 1; k <= grid.intervals(); ++k) {
    const double occ = basis_Psi(grid, k, t);
    if (occ == 0.0 && t <= grid.lower(k)) break;  // knots increase; nothing further
    acc += occ * std::exp(static_cast<double>(omega[k - 1]));
  }
  return acc;
}

/// Per-observation loss g(x, Lambda, Delta) = Lambda e^x - Delta x.
inline double loss_g(double x, double Lambda, int delta) {
  return Lambda * std::exp(x) - delta * x;
}

/// min over x of loss_g = Delta (1 - log Delta + log Lambda), with the
/// convention 0 log 0 = 0 (so the censored minimum is 0).
inline double loss_g_min(double Lambda, int delta) {
  return (delta == 0) ? 0.0 : 1.0 + std::log(Lambda);
}

}  // namespace hdsa
