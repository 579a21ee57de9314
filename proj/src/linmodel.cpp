#include "randseries/linmodel.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>
#include <string>

#include "randseries/quadrature.hpp"

namespace randseries {

namespace {

double log_normal_density(double x, double variance) {
  return -0.5 * std::log(2.0 * std::numbers::pi * variance) - 0.5 * x * x / variance;
}

// Pr(sigma^2 >= floor) for sigma^2 ~ InvGamma(shape, scale), by quadrature over
// the precision 1/sigma^2 ~ Gamma(shape, scale) on (0, 1/floor].
double log_inverse_gamma_tail(double shape, double scale, double floor) {
  // Pr(sigma^2 >= floor) = Pr(lambda <= 1/floor) for the gamma precision lambda
  const double upper = 1.0 / floor;
  const double log_norm = shape * std::log(scale) - log_gamma(shape);
  auto density = [&](double lambda) {
    if (lambda <= 0.0) return 0.0;
    return std::exp(log_norm + (shape - 1.0) * std::log(lambda) - scale * lambda);
  };
  const double mode = shape > 1.0 ? (shape - 1.0) / scale : 0.0;
  const double reach = (shape + 50.0 * std::sqrt(shape) + 50.0) / scale;  // mass beyond is negligible
  if (upper >= reach) return 0.0;
  if (upper <= mode || upper <= shape / scale) {
    const double p = integrate_adaptive(density, 0.0, upper, 1e-300 + 1e-14 * density(upper) * upper);
    return std::log(std::max(p, 1e-300));
  }
  double tail = integrate_adaptive(density, upper, reach, 1e-16);
  return std::log1p(-std::min(tail, 1.0 - 1e-16));
}

Vector mix_curves(const std::vector<double>& log_weights, const std::vector<Vector>& curves,
                  std::vector<double>& posterior) {
  LogSumExp norm;
  for (double v : log_weights) norm.add(v);
  Vector out = Vector::Zero(curves.front().size());
  posterior.clear();
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const double w = std::exp(log_weights[i] - norm.value());
    posterior.push_back(w);
    out += w * curves[i];
  }
  return out;
}

}  // namespace

WhiteNoiseFit fit_whitenoise(const SequenceModel& model) {
  const int m = static_cast<int>(model.observations.size());
  if (!(model.n >= 1.0)) throw ConfigError("sequence model needs n >= 1");
  if (!(model.prior_variance > 0.0)) throw ConfigError("sequence model needs tau2 > 0");
  if (model.dimension_prior.j_max() > m) {
    throw ConfigError("truncation point J_max exceeds the number of observed coordinates");
  }
  const double noise = 1.0 / model.n;
  const double tau2 = model.prior_variance;
  WhiteNoiseFit fit;
  fit.shrinkage = model.n * tau2 / (model.n * tau2 + 1.0);

  // prefix sums of the two per-coordinate log densities
  std::vector<double> signal(static_cast<std::size_t>(m + 1), 0.0);
  std::vector<double> null(static_cast<std::size_t>(m + 1), 0.0);
  for (int i = 0; i < m; ++i) {
    signal[static_cast<std::size_t>(i + 1)] = signal[static_cast<std::size_t>(i)] +
                                              log_normal_density(model.observations[i], tau2 + noise);
    null[static_cast<std::size_t>(i + 1)] = null[static_cast<std::size_t>(i)] +
                                            log_normal_density(model.observations[i], noise);
  }
  LogSumExp norm;
  for (int J = model.dimension_prior.j_min(); J <= model.dimension_prior.j_max(); ++J) {
    const auto Ju = static_cast<std::size_t>(J);
    const double lm = signal[Ju] + (null[static_cast<std::size_t>(m)] - null[Ju]);
    fit.dimensions.push_back(J);
    fit.log_marginals.push_back(lm);
    norm.add(model.dimension_prior.log_pmf(J) + lm);
  }
  fit.coefficients = Vector::Zero(m);
  for (std::size_t idx = 0; idx < fit.dimensions.size(); ++idx) {
    const int J = fit.dimensions[idx];
    const double w = std::exp(model.dimension_prior.log_pmf(J) + fit.log_marginals[idx] - norm.value());
    fit.dimension_posterior.push_back(w);
    fit.coefficients.head(J) += w * fit.shrinkage * model.observations.head(J);
  }
  return fit;
}

ConjugateFit conjugate_fit(const Matrix& design, const Vector& response, const GaussRegressionModel& model) {
  if (!(model.prior_variance > 0.0) || !(model.noise_shape > 0.0) || !(model.noise_scale > 0.0)) {
    throw ConfigError("regression hyperparameters must be positive");
  }
  const auto n = static_cast<double>(design.rows());
  const auto J = design.cols();
  const double tau2 = model.prior_variance;
  const Matrix precision = design.transpose() * design + Matrix::Identity(J, J) / tau2;
  const Eigen::LLT<Matrix> llt(precision);
  if (llt.info() != Eigen::Success) throw NumericalError("regularized normal equations are not positive definite");
  ConjugateFit fit;
  const Vector rhs = design.transpose() * response;
  fit.coefficients = llt.solve(rhs);
  const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double residual = std::max(0.0, response.squaredNorm() - rhs.dot(fit.coefficients));
  const double shape_post = model.noise_shape + 0.5 * n;
  const double scale_post = model.noise_scale + 0.5 * residual;
  fit.log_evidence = -0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * J * std::log(tau2) - 0.5 * log_det +
                     model.noise_shape * std::log(model.noise_scale) - shape_post * std::log(scale_post) +
                     log_gamma(shape_post) - log_gamma(model.noise_shape);
  if (model.sigma_min > 0.0) {
    const double floor = model.sigma_min * model.sigma_min;
    fit.log_evidence += log_inverse_gamma_tail(shape_post, scale_post, floor) -
                        log_inverse_gamma_tail(model.noise_shape, model.noise_scale, floor);
  }
  return fit;
}

PosteriorEstimate fit_gauss_regression(const GaussRegressionModel& model, std::span<const double> z,
                                       std::span<const double> x, const Vector& grid) {
  if (z.size() != x.size()) throw ConfigError("covariate and response columns differ in length");
  for (double v : z) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) throw ConfigError("covariate value outside [0,1]");
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw ConfigError("nonfinite regression response");
  }
  std::vector<std::size_t> order(z.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::pair(z[a], x[a]) < std::pair(z[b], x[b]); });
  std::vector<double> zs;
  Vector xs(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    zs.push_back(z[order[i]]);
    xs[static_cast<Eigen::Index>(i)] = x[order[i]];
  }

  PosteriorEstimate est;
  est.grid = grid;
  std::vector<double> log_weights;
  std::vector<Vector> curves;
  for (int j = model.dimension_prior.j_min(); j <= model.dimension_prior.j_max(); ++j) {
    const SplineBasis basis = SplineBasis::with_dimension(model.order, j);
    const ConjugateFit fit = conjugate_fit(design_matrix(basis, zs), xs, model);
    std::vector<double> g(grid.data(), grid.data() + grid.size());
    curves.push_back(design_matrix(basis, g) * fit.coefficients);
    log_weights.push_back(model.dimension_prior.log_pmf(j) + fit.log_evidence);
    est.dimensions.push_back(j);
  }
  est.mean = mix_curves(log_weights, curves, est.dimension_posterior);
  est.std_error = Vector::Zero(grid.size());
  return est;
}

FunctionalDesign build_functional_design(const Matrix& trajectories, const Vector& time_grid,
                                         const SplineBasis& basis) {
  const auto T = time_grid.size();
  if (T < 2) throw ConfigError("functional design needs at least 2 time points");
  if (trajectories.cols() != T) throw ConfigError("trajectory length does not match the time grid");
  for (Eigen::Index t = 0; t < T; ++t) {
    if (!(time_grid[t] >= 0.0 && time_grid[t] <= 1.0) || (t > 0 && !(time_grid[t] > time_grid[t - 1]))) {
      throw ConfigError("time grid must be strictly increasing within [0,1]");
    }
  }
  std::vector<double> times(time_grid.data(), time_grid.data() + T);
  const Matrix B = design_matrix(basis, times);  // T x J
  Vector weights = Vector::Zero(T);
  for (Eigen::Index t = 0; t + 1 < T; ++t) {
    const double h = 0.5 * (time_grid[t + 1] - time_grid[t]);
    weights[t] += h;
    weights[t + 1] += h;
  }
  FunctionalDesign design;
  design.time_grid = time_grid;
  design.integrals = trajectories * weights.asDiagonal() * B;
  design.coarse_grid = T < 4 * basis.dimension();
  return design;
}

PosteriorEstimate fit_functional(const Matrix& trajectories, const Vector& time_grid, const Vector& responses,
                                 const GaussRegressionModel& model, const Vector& grid) {
  if (trajectories.rows() != responses.size()) throw ConfigError("trajectory and response counts differ");
  // canonical row order: by response, then trajectory values
  std::vector<Eigen::Index> order(static_cast<std::size_t>(responses.size()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (responses[a] != responses[b]) return responses[a] < responses[b];
    for (Eigen::Index t = 0; t < trajectories.cols(); ++t) {
      if (trajectories(a, t) != trajectories(b, t)) return trajectories(a, t) < trajectories(b, t);
    }
    return false;
  });
  Matrix Z(trajectories.rows(), trajectories.cols());
  Vector y(responses.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    Z.row(static_cast<Eigen::Index>(i)) = trajectories.row(order[i]);
    y[static_cast<Eigen::Index>(i)] = responses[order[i]];
  }

  PosteriorEstimate est;
  est.grid = grid;
  std::vector<double> log_weights;
  std::vector<Vector> curves;
  std::vector<double> g(grid.data(), grid.data() + grid.size());
  for (int j = model.dimension_prior.j_min(); j <= model.dimension_prior.j_max(); ++j) {
    const SplineBasis basis = SplineBasis::with_dimension(model.order, j);
    const FunctionalDesign design = build_functional_design(Z, time_grid, basis);
    const ConjugateFit fit = conjugate_fit(design.integrals, y, model);
    curves.push_back(design_matrix(basis, g) * fit.coefficients);
    log_weights.push_back(model.dimension_prior.log_pmf(j) + fit.log_evidence);
    est.dimensions.push_back(j);
  }
  est.mean = mix_curves(log_weights, curves, est.dimension_posterior);
  est.std_error = Vector::Zero(grid.size());
  return est;
}

}  // namespace randseries
