#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "randseries/engine.hpp"
#include "randseries/estimate.hpp"
#include "randseries/priors.hpp"

namespace randseries {

/// Random-series density prior: f = sum_k theta_k B*_k with theta ~ Dirichlet
/// on the simplex and J drawn from the dimension prior.
struct DensityModel {
  int order = 3;
  DimensionPrior dimension_prior = DimensionPrior::geometric(0.15, 5, 12);
  CoefficientPrior coefficient_prior = CoefficientPrior::dirichlet({1.0});
};

/// Dirichlet integral of prod theta_k^{count_k} against the normalized prior.
class DirichletMarginal final : public LogMarginal {
 public:
  DirichletMarginal(const CoefficientPrior& prior, int dimension);
  double index_term(int k, int count, int tally) const override;
  double total_term(int total) const override;

 private:
  std::vector<double> alpha_;
  double alpha_sum_;
};

RatioSumSpec density_spec(const DensityModel& model, std::span<const double> data);

PosteriorEstimate fit_density(std::span<const double> data, const DensityModel& model, const Vector& grid,
                              const Method& method, bool with_variance = false);

/// Posterior variance of f(x), clamped at zero.
double posterior_variance_at(const DensityModel& model, std::span<const double> data, double x,
                             const Method& method);

/// Monotone map from the real line onto [0,1] with its derivative.
struct Link {
  std::string name;
  std::function<double(double)> forward;
  std::function<double(double)> derivative;

  static Link logistic();
  static Link identity();
};

/// Sample mapped through the link; densities on the original scale are
/// f(link(y)) * link'(y).
struct TransformedSample {
  std::vector<double> values;
  Link link;

  Vector back_transform(const Vector& y, const Vector& unit_density) const;
};

TransformedSample transform_unbounded(std::span<const double> data, const Link& link = Link::logistic());

/// Density estimate on the real line at the points y.
PosteriorEstimate fit_density_unbounded(std::span<const double> data, const DensityModel& model, const Vector& y,
                                        const Method& method, const Link& link = Link::logistic());

/// Exponential/normal mixture truth on [0,1] used for the simulation study,
/// truncated to the unit interval and renormalized.
class MixtureTruth {
 public:
  MixtureTruth();
  double density(double x) const;
  std::vector<double> sample(int n, Rng& rng) const;

 private:
  static double unnormalized(double x);
  double norm_;
  double bound_;
};

}  // namespace randseries
