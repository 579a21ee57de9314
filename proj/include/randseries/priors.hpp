#pragma once

#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "randseries/common.hpp"

namespace randseries {

using Rng = std::mt19937_64;

/// Seeds a generator from a master seed and a stream index.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Prior on the basis dimension J, truncated to [j_min, j_max] and renormalized.
///
/// Untruncated families (support j >= 1 for geometric, j >= 0 otherwise):
///   geometric(p):           p (1-p)^(j-1)
///   poisson(lambda):        exp(-lambda) lambda^j / j!
///   negative-binomial(r,p): Gamma(j+r) / (Gamma(r) j!) p^r (1-p)^j
class DimensionPrior {
 public:
  enum class Family { geometric, poisson, negative_binomial, uniform };

  static DimensionPrior geometric(double p, int j_min, int j_max);
  static DimensionPrior poisson(double lambda, int j_min, int j_max);
  static DimensionPrior negative_binomial(double r, double p, int j_min, int j_max);
  static DimensionPrior uniform(int j_min, int j_max);
  /// Point mass at j, used for fixed-dimension fits.
  static DimensionPrior fixed(int j);

  /// Parses "geom:p:lo:hi", "poisson:lambda:lo:hi", "negbin:r:p:lo:hi", "uniform:lo:hi"
  /// or "fixed:j".
  static DimensionPrior parse(std::string_view text);

  Family family() const { return family_; }
  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  int size() const { return j_max_ - j_min_ + 1; }
  const std::vector<double>& parameters() const { return params_; }

  /// Normalized log mass over the truncation range.
  double log_pmf(int j) const;
  /// Untruncated log mass of the family.
  double family_log_pmf(int j) const;
  /// Untruncated log Pr(J > j).
  double log_survival(int j) const;

  std::string to_string() const;

 private:
  DimensionPrior(Family family, std::vector<double> params, int j_min, int j_max);

  Family family_;
  std::vector<double> params_;
  int j_min_;
  int j_max_;
  std::vector<double> log_pmf_;
};

/// Prior on the J coefficients given J. Parameters given as a single value
/// are broadcast to every coordinate.
class CoefficientPrior {
 public:
  enum class Family { dirichlet, gamma, beta, normal };

  static CoefficientPrior dirichlet(std::vector<double> alpha);
  static CoefficientPrior gamma(std::vector<double> shape, std::vector<double> rate);
  static CoefficientPrior beta(std::vector<double> a, std::vector<double> b);
  static CoefficientPrior normal(double variance);

  /// Parses "dirichlet:a", "gamma:a:b", "beta:a:b" or "normal:tau2".
  static CoefficientPrior parse(std::string_view text);

  Family family() const { return family_; }

  /// First parameter of coordinate k (Dirichlet/Gamma/Beta shape, normal variance).
  double first(int k) const;
  /// Second parameter of coordinate k (Gamma rate, Beta b).
  double second(int k) const;
  double variance() const { return first(0); }

  /// Throws ConfigError unless per-coordinate parameters cover dimension j.
  void check_dimension(int j) const;

  Vector sample(int j, Rng& rng) const;
  double log_density(const Vector& theta) const;

  std::string to_string() const;

 private:
  CoefficientPrior(Family family, std::vector<double> first, std::vector<double> second);

  Family family_;
  std::vector<double> first_;
  std::vector<double> second_;
};

}  // namespace randseries
