#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <utility>

namespace hdsa {

/// A dataset violates a model precondition, e.g. an event time lying on a
/// knot or outside every interval (where the hazard vanishes).
class InfeasibleDataError : public std::runtime_error {
public:
  InfeasibleDataError(const std::string& msg, long index)
      : std::runtime_error(msg), index_(index) {}

  /// Zero-based index of the offending observation.
  long index() const noexcept { return index_; }

private:
  long index_;
};

/// An iterative solver exhausted its iteration budget. Carries the last
/// iterate so callers can inspect or retry from it.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& msg, Eigen::VectorXd beta,
                   Eigen::VectorXd omega, double grad_norm, int iterations)
      : std::runtime_error(msg),
        beta(std::move(beta)),
        omega(std::move(omega)),
        grad_norm(grad_norm),
        iterations(iterations) {}

  Eigen::VectorXd beta;
  Eigen::VectorXd omega;
  double grad_norm;
  int iterations;
};

/// A metric is undefined on the given input (e.g. no comparable pairs for the
/// concordance index, or a zero denominator in a ratio).
class UndefinedMetricError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Configuration / usage problem: bad config file, unknown key, invalid value.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace hdsa
