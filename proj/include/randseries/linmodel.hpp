#pragma once

#include <span>
#include <vector>

#include "randseries/estimate.hpp"
#include "randseries/priors.hpp"
#include "randseries/spline_basis.hpp"

namespace randseries {

/// Gaussian sequence model X_i = theta_i + n^{-1/2} eps_i with theta_i ~ N(0, tau2)
/// for i <= J and theta_i = 0 beyond the truncation point J.
struct SequenceModel {
  Vector observations;
  double n = 1.0;
  double prior_variance = 1.0;
  DimensionPrior dimension_prior = DimensionPrior::fixed(1);
};

struct WhiteNoiseFit {
  Vector coefficients;  ///< posterior means mixed over J
  double shrinkage = 0.0;
  std::vector<int> dimensions;
  std::vector<double> log_marginals;
  std::vector<double> dimension_posterior;
};

WhiteNoiseFit fit_whitenoise(const SequenceModel& model);

/// Spline regression X = f(Z) + eps with f = theta^T B, theta | sigma^2 ~
/// N(0, sigma^2 tau2 I) and sigma^2 ~ InvGamma(shape, scale), optionally
/// truncated to sigma >= sigma_min.
struct GaussRegressionModel {
  int order = 3;
  DimensionPrior dimension_prior = DimensionPrior::geometric(0.15, 4, 12);
  double prior_variance = 1.0;
  double noise_shape = 1.0;
  double noise_scale = 1.0;
  double sigma_min = 0.0;
};

/// Posterior mean coefficients and log evidence for one design matrix.
struct ConjugateFit {
  Vector coefficients;
  double log_evidence = 0.0;
};

ConjugateFit conjugate_fit(const Matrix& design, const Vector& response, const GaussRegressionModel& model);

PosteriorEstimate fit_gauss_regression(const GaussRegressionModel& model, std::span<const double> z,
                                       std::span<const double> x, const Vector& grid);

/// Functional covariates reduced to W_ik = integral Z_i(t) B_k(t) dt.
struct FunctionalDesign {
  Vector time_grid;
  Matrix integrals;          ///< n x J
  bool coarse_grid = false;  ///< fewer than 4J time points
};

/// Trapezoidal integration of each trajectory (row) against the basis.
FunctionalDesign build_functional_design(const Matrix& trajectories, const Vector& time_grid,
                                         const SplineBasis& basis);

/// Posterior mean of the coefficient function beta(t) on the grid.
PosteriorEstimate fit_functional(const Matrix& trajectories, const Vector& time_grid, const Vector& responses,
                                 const GaussRegressionModel& model, const Vector& grid);

}  // namespace randseries
