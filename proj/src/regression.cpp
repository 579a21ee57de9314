#include "randseries/regression.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "randseries/spectral.hpp"

namespace randseries {

namespace {

void check_covariates(std::span<const double> z, std::size_t responses) {
  if (z.size() != responses) throw ConfigError("covariate and response columns differ in length");
  for (double v : z) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw ConfigError("covariate value " + std::to_string(v) + " outside [0,1]");
    }
  }
}

std::vector<std::size_t> sorted_order(std::span<const double> z, std::span<const int> x) {
  std::vector<std::size_t> order(z.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::pair(z[a], x[a]) < std::pair(z[b], x[b]); });
  return order;
}

void check_grid(const Vector& grid) {
  for (double v : grid) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("grid value outside [0,1]");
  }
}

}  // namespace

BetaMarginal::BetaMarginal(const CoefficientPrior& prior, int dimension) {
  if (prior.family() != CoefficientPrior::Family::beta) {
    throw ConfigError("binary regression requires a beta coefficient prior");
  }
  prior.check_dimension(dimension);
  for (int k = 0; k < dimension; ++k) {
    a_.push_back(prior.first(k));
    b_.push_back(prior.second(k));
    log_norm_.push_back(log_beta(a_.back(), b_.back()));
  }
}

double BetaMarginal::index_term(int k, int count, int tally) const {
  const auto ku = static_cast<std::size_t>(k);
  return log_beta(a_[ku] + tally, b_[ku] + count - tally) - log_norm_[ku];
}

RatioSumSpec binary_spec(const BinaryModel& model, std::span<const double> z, std::span<const int> x) {
  check_covariates(z, x.size());
  for (int v : x) {
    if (v != 0 && v != 1) throw ConfigError("binary response must be 0 or 1, got " + std::to_string(v));
  }
  const auto order = sorted_order(z, x);
  RatioSumSpec spec;
  spec.prior = model.dimension_prior;
  for (int j = spec.prior.j_min(); j <= spec.prior.j_max(); ++j) {
    const SplineBasis basis = SplineBasis::with_dimension(model.order, j);
    DimensionTerm term;
    term.dimension = j;
    for (std::size_t i : order) term.slots.push_back(build_slot(basis, z[i], x[i]));
    term.evaluation = [basis](double v) { return basis.evaluate(v); };
    term.marginal = std::make_shared<BetaMarginal>(model.coefficient_prior, j);
    term.evaluation_tally = 1;
    spec.terms.push_back(std::move(term));
  }
  canonicalize(spec);
  return spec;
}

RatioSumSpec poisson_spec(const PoissonModel& model, std::span<const double> z, std::span<const int> x) {
  check_covariates(z, x.size());
  for (int v : x) {
    if (v < 0) throw ConfigError("Poisson count must be a nonnegative integer, got " + std::to_string(v));
  }
  if (model.coefficient_prior.family() != CoefficientPrior::Family::gamma) {
    throw ConfigError("Poisson regression requires a gamma coefficient prior");
  }
  const auto order = sorted_order(z, x);
  RatioSumSpec spec;
  spec.prior = model.dimension_prior;
  for (int j = spec.prior.j_min(); j <= spec.prior.j_max(); ++j) {
    const SplineBasis basis = SplineBasis::with_dimension(model.order, j);
    DimensionTerm term;
    term.dimension = j;
    Vector rates(j);
    for (int k = 0; k < j; ++k) rates[k] = model.coefficient_prior.second(k);
    for (std::size_t i : order) {
      const auto values = basis.evaluate(z[i]);
      for (std::size_t a = 0; a < values.values.size(); ++a) rates[values.first + static_cast<int>(a)] += values.values[a];
      term.slots.push_back(Slot::composition(values, x[i]));
    }
    term.evaluation = [basis](double v) { return basis.evaluate(v); };
    term.marginal = std::make_shared<GammaMarginal>(model.coefficient_prior, rates);
    spec.terms.push_back(std::move(term));
  }
  canonicalize(spec);
  return spec;
}

PosteriorEstimate fit_binary(std::span<const double> z, std::span<const int> x, const BinaryModel& model,
                             const Vector& grid, const Method& method) {
  check_grid(grid);
  return summarize(RatioEvaluator(binary_spec(model, z, x), method), grid);
}

PosteriorEstimate fit_poisson(std::span<const double> z, std::span<const int> x, const PoissonModel& model,
                              const Vector& grid, const Method& method) {
  check_grid(grid);
  return summarize(RatioEvaluator(poisson_spec(model, z, x), method), grid);
}

}  // namespace randseries
