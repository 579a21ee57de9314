#include "randseries/density.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "randseries/quadrature.hpp"

namespace randseries {

namespace {

void check_unit_data(std::span<const double> data, const char* what) {
  for (double v : data) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw ConfigError(std::string(what) + " value " + std::to_string(v) + " outside [0,1]");
    }
  }
}

}  // namespace

DirichletMarginal::DirichletMarginal(const CoefficientPrior& prior, int dimension) : alpha_sum_(0.0) {
  if (prior.family() != CoefficientPrior::Family::dirichlet) {
    throw ConfigError("density model requires a dirichlet coefficient prior");
  }
  prior.check_dimension(dimension);
  for (int k = 0; k < dimension; ++k) {
    alpha_.push_back(prior.first(k));
    alpha_sum_ += alpha_.back();
  }
}

double DirichletMarginal::index_term(int k, int count, int /*tally*/) const {
  const double a = alpha_[static_cast<std::size_t>(k)];
  return log_gamma(a + count) - log_gamma(a);
}

double DirichletMarginal::total_term(int total) const {
  return log_gamma(alpha_sum_) - log_gamma(alpha_sum_ + total);
}

RatioSumSpec density_spec(const DensityModel& model, std::span<const double> data) {
  check_unit_data(data, "density observation");
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());

  RatioSumSpec spec;
  spec.prior = model.dimension_prior;
  for (int j = spec.prior.j_min(); j <= spec.prior.j_max(); ++j) {
    const ScaledBasis scaled(SplineBasis::with_dimension(model.order, j));
    DimensionTerm term;
    term.dimension = j;
    term.slots.reserve(sorted.size());
    for (double x : sorted) term.slots.push_back(build_slot(scaled, x));
    term.evaluation = [scaled](double x) { return scaled.evaluate(x); };
    term.marginal = std::make_shared<DirichletMarginal>(model.coefficient_prior, j);
    spec.terms.push_back(std::move(term));
  }
  canonicalize(spec);
  return spec;
}

PosteriorEstimate fit_density(std::span<const double> data, const DensityModel& model, const Vector& grid,
                              const Method& method, bool with_variance) {
  check_unit_data(std::span<const double>(grid.data(), static_cast<std::size_t>(grid.size())), "grid");
  const RatioEvaluator evaluator(density_spec(model, data), method, with_variance);
  PosteriorEstimate est = summarize(evaluator, grid);
  if (with_variance) {
    est.variance.resize(grid.size());
    parallel_for(static_cast<std::size_t>(grid.size()), [&](std::size_t i) {
      const auto k = static_cast<Eigen::Index>(i);
      est.variance[k] = std::max(0.0, evaluator.second_moment(grid[k]) - est.mean[k] * est.mean[k]);
    });
  }
  return est;
}

double posterior_variance_at(const DensityModel& model, std::span<const double> data, double x,
                             const Method& method) {
  const RatioEvaluator evaluator(density_spec(model, data), method, true);
  const double mean = evaluator.evaluate(x).value;
  return std::max(0.0, evaluator.second_moment(x) - mean * mean);
}

Link Link::logistic() {
  return {"logistic", [](double y) { return 1.0 / (1.0 + std::exp(-y)); },
          [](double y) {
            const double p = 1.0 / (1.0 + std::exp(-y));
            return p * (1.0 - p);
          }};
}

Link Link::identity() {
  return {"identity", [](double y) { return y; }, [](double) { return 1.0; }};
}

Vector TransformedSample::back_transform(const Vector& y, const Vector& unit_density) const {
  Vector out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) out[i] = unit_density[i] * link.derivative(y[i]);
  return out;
}

TransformedSample transform_unbounded(std::span<const double> data, const Link& link) {
  TransformedSample out{{}, link};
  out.values.reserve(data.size());
  for (double v : data) {
    if (!std::isfinite(v)) throw ConfigError("nonfinite observation in density data");
    out.values.push_back(link.forward(v));
  }
  return out;
}

PosteriorEstimate fit_density_unbounded(std::span<const double> data, const DensityModel& model, const Vector& y,
                                        const Method& method, const Link& link) {
  const TransformedSample sample = transform_unbounded(data, link);
  Vector unit(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) unit[i] = link.forward(y[i]);
  PosteriorEstimate est = fit_density(sample.values, model, unit, method);
  est.grid = y;
  est.mean = sample.back_transform(y, est.mean);
  est.std_error = sample.back_transform(y, est.std_error);
  return est;
}

MixtureTruth::MixtureTruth() {
  norm_ = integrate_adaptive(unnormalized, 0.0, 1.0, 1e-13);
  double peak = 0.0;
  for (int i = 0; i <= 10000; ++i) peak = std::max(peak, unnormalized(i / 10000.0));
  bound_ = 1.01 * peak;
}

double MixtureTruth::unnormalized(double x) {
  return 0.75 * 3.0 * std::exp(-3.0 * x) +
         0.25 * std::sqrt(32.0 / std::numbers::pi) * std::exp(-32.0 * (x - 0.75) * (x - 0.75));
}

double MixtureTruth::density(double x) const {
  if (x < 0.0 || x > 1.0) return 0.0;
  return unnormalized(x) / norm_;
}

std::vector<double> MixtureTruth::sample(int n, Rng& rng) const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  while (static_cast<int>(out.size()) < n) {
    const double x = uniform();
    if (uniform() * bound_ <= unnormalized(x)) out.push_back(x);
  }
  return out;
}

PosteriorEstimate summarize(const RatioEvaluator& evaluator, const Vector& grid) {
  PosteriorEstimate est;
  est.grid = grid;
  est.method = evaluator.method();
  const auto results = evaluator.evaluate_grid(grid);
  est.mean.resize(grid.size());
  est.std_error.resize(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    est.mean[i] = results[static_cast<std::size_t>(i)].value;
    est.std_error[i] = results[static_cast<std::size_t>(i)].std_error;
  }
  const auto& prior = evaluator.spec().prior;
  for (int j = prior.j_min(); j <= prior.j_max(); ++j) est.dimensions.push_back(j);
  est.dimension_posterior = evaluator.dimension_posterior();
  return est;
}

}  // namespace randseries
