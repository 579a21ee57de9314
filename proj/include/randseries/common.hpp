#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace randseries {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Malformed input or configuration (bad parameters, data outside the domain).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that cannot produce a finite answer.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact enumeration would visit more configurations than allowed.
class BudgetExceeded : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Reentrant log-gamma; std::lgamma writes the global signgam on glibc.
double log_gamma(double x);
double log_beta(double a, double b);

/// Streaming log-sum-exp with a running maximum.
class LogSumExp {
 public:
  void add(double log_value) {
    if (log_value == kNegInf) return;
    if (log_value <= max_) {
      sum_ += std::exp(log_value - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - log_value) + 1.0;
      max_ = log_value;
    }
  }
  double value() const { return sum_ > 0.0 ? max_ + std::log(sum_) : kNegInf; }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

double log_sum_exp(const Vector& v);

/// Evenly spaced points over [lo, hi], both ends included.
Vector linspace(double lo, double hi, int count);

/// Worker count: hardware concurrency capped by RANDSERIES_THREADS.
unsigned worker_count();

/// Runs fn(i) for i in [0, n) across worker threads. Results must not depend
/// on scheduling; every index is handled exactly once.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace randseries
