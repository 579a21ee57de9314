#pragma once

#include <span>

#include "randseries/compositions.hpp"
#include "randseries/engine.hpp"
#include "randseries/estimate.hpp"
#include "randseries/priors.hpp"

namespace randseries {

/// Binary regression, identity link: P(X = 1 | z) = theta^T B(z), theta_k ~ Beta.
struct BinaryModel {
  int order = 2;
  DimensionPrior dimension_prior = DimensionPrior::geometric(0.15, 2, 8);
  CoefficientPrior coefficient_prior = CoefficientPrior::beta({1.0}, {1.0});
};

/// Poisson regression, identity link: E[X | z] = theta^T B(z), theta_k ~ Gamma.
struct PoissonModel {
  int order = 2;
  DimensionPrior dimension_prior = DimensionPrior::geometric(0.15, 2, 8);
  CoefficientPrior coefficient_prior = CoefficientPrior::gamma({1.0}, {1.0});
};

/// Beta integral: log B(a + x_k, b + c_k - x_k) - log B(a, b) per index.
class BetaMarginal final : public LogMarginal {
 public:
  BetaMarginal(const CoefficientPrior& prior, int dimension);
  double index_term(int k, int count, int tally) const override;
  bool uses_tally() const override { return true; }

 private:
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> log_norm_;
};

RatioSumSpec binary_spec(const BinaryModel& model, std::span<const double> z, std::span<const int> x);
RatioSumSpec poisson_spec(const PoissonModel& model, std::span<const double> z, std::span<const int> x);

PosteriorEstimate fit_binary(std::span<const double> z, std::span<const int> x, const BinaryModel& model,
                             const Vector& grid, const Method& method);
PosteriorEstimate fit_poisson(std::span<const double> z, std::span<const int> x, const PoissonModel& model,
                              const Vector& grid, const Method& method);

}  // namespace randseries
