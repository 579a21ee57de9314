#pragma once

#include <span>

#include "randseries/engine.hpp"
#include "randseries/estimate.hpp"
#include "randseries/priors.hpp"

namespace randseries {

/// Periodogram ordinates on the [0,1] frequency scale: omega_j = 2j/n for
/// j = 1..floor(n/2), I(omega) = |sum_t X_t exp(-i t pi omega)|^2 / (2 pi n).
/// omega = 1 corresponds to the Nyquist angular frequency pi.
struct Periodogram {
  int length = 0;
  Vector frequencies;
  Vector ordinates;
  double removed_mean = 0.0;

  int count() const { return static_cast<int>(ordinates.size()); }
};

/// Mean-subtracted periodogram by direct summation.
Periodogram periodogram(std::span<const double> series);

/// Whittle model with inverse link: 1/f = theta^T B, theta_k ~ Gamma(a_k, b_k).
struct SpectralModel {
  int order = 3;
  DimensionPrior dimension_prior = DimensionPrior::geometric(0.15, 5, 12);
  CoefficientPrior coefficient_prior = CoefficientPrior::gamma({1.0}, {1.0});
};

/// Gamma integral with per-index rates r_k: sum over the per-index terms
/// a log b - log Gamma(a) + log Gamma(a + c) - (a + c) log r.
class GammaMarginal final : public LogMarginal {
 public:
  GammaMarginal(const CoefficientPrior& prior, Vector rates);
  double index_term(int k, int count, int tally) const override;

 private:
  std::vector<double> shape_;
  std::vector<double> constant_;
  std::vector<double> log_rate_;
};

RatioSumSpec spectral_spec(const Periodogram& pgram, const SpectralModel& model);

/// Posterior mean of the inverse spectral density 1/f on the grid.
PosteriorEstimate fit_inverse_spectral(const Periodogram& pgram, const SpectralModel& model, const Vector& grid,
                                       const Method& method);

/// Plug-in reciprocal 1 / E[1/f]; not a posterior mean of f.
Vector spectral_density_estimate(const Vector& inverse_mean);

}  // namespace randseries
