#include "randseries/spectral.hpp"

#include <numbers>
#include <string>

namespace randseries {

Periodogram periodogram(std::span<const double> series) {
  const int n = static_cast<int>(series.size());
  if (n < 2) throw ConfigError("periodogram needs a series of length >= 2, got " + std::to_string(n));
  double mean = 0.0;
  for (double v : series) {
    if (!std::isfinite(v)) throw ConfigError("nonfinite value in time series");
    mean += v;
  }
  mean /= n;

  Periodogram out;
  out.length = n;
  out.removed_mean = mean;
  const int nu = n / 2;
  out.frequencies.resize(nu);
  out.ordinates.resize(nu);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int j = 1; j <= nu; ++j) {
    // t * pi * omega_j = 2 pi t j / n, reduced modulo n for accurate angles
    double re = 0.0;
    double im = 0.0;
    for (int t = 1; t <= n; ++t) {
      const long long phase = (static_cast<long long>(t) * j) % n;
      const double angle = two_pi * static_cast<double>(phase) / n;
      const double x = series[static_cast<std::size_t>(t - 1)] - mean;
      re += x * std::cos(angle);
      im -= x * std::sin(angle);
    }
    out.frequencies[j - 1] = 2.0 * j / n;
    out.ordinates[j - 1] = (re * re + im * im) / (two_pi * n);
  }
  return out;
}

GammaMarginal::GammaMarginal(const CoefficientPrior& prior, Vector rates) {
  if (prior.family() != CoefficientPrior::Family::gamma) {
    throw ConfigError("this model requires a gamma coefficient prior");
  }
  const int j = static_cast<int>(rates.size());
  prior.check_dimension(j);
  for (int k = 0; k < j; ++k) {
    const double a = prior.first(k);
    const double b = prior.second(k);
    if (!(rates[k] > 0.0)) throw NumericalError("nonpositive gamma posterior rate");
    shape_.push_back(a);
    constant_.push_back(a * std::log(b) - log_gamma(a));
    log_rate_.push_back(std::log(rates[k]));
  }
}

double GammaMarginal::index_term(int k, int count, int /*tally*/) const {
  const auto ku = static_cast<std::size_t>(k);
  const double shape = shape_[ku] + count;
  return constant_[ku] + log_gamma(shape) - shape * log_rate_[ku];
}

RatioSumSpec spectral_spec(const Periodogram& pgram, const SpectralModel& model) {
  if (pgram.count() < 1) throw ConfigError("Whittle likelihood needs at least one periodogram ordinate");
  if (model.coefficient_prior.family() != CoefficientPrior::Family::gamma) {
    throw ConfigError("spectral model requires a gamma coefficient prior");
  }
  RatioSumSpec spec;
  spec.prior = model.dimension_prior;
  for (int j = spec.prior.j_min(); j <= spec.prior.j_max(); ++j) {
    const SplineBasis basis = SplineBasis::with_dimension(model.order, j);
    DimensionTerm term;
    term.dimension = j;
    Vector rates(j);
    for (int k = 0; k < j; ++k) rates[k] = model.coefficient_prior.second(k);
    for (int s = 0; s < pgram.count(); ++s) {
      const auto values = basis.evaluate(pgram.frequencies[s]);
      for (std::size_t i = 0; i < values.values.size(); ++i) {
        rates[values.first + static_cast<int>(i)] += pgram.ordinates[s] * values.values[i];
      }
      term.slots.push_back(Slot::index(values));
    }
    term.evaluation = [basis](double w) { return basis.evaluate(w); };
    term.marginal = std::make_shared<GammaMarginal>(model.coefficient_prior, rates);
    spec.terms.push_back(std::move(term));
  }
  canonicalize(spec);
  return spec;
}

PosteriorEstimate fit_inverse_spectral(const Periodogram& pgram, const SpectralModel& model, const Vector& grid,
                                       const Method& method) {
  for (double w : grid) {
    if (!(w >= 0.0 && w <= 1.0)) throw ConfigError("frequency grid value outside [0,1]");
  }
  return summarize(RatioEvaluator(spectral_spec(pgram, model), method), grid);
}

Vector spectral_density_estimate(const Vector& inverse_mean) {
  Vector out(inverse_mean.size());
  for (Eigen::Index i = 0; i < inverse_mean.size(); ++i) {
    if (!(inverse_mean[i] > 0.0)) throw NumericalError("nonpositive inverse spectral estimate");
    out[i] = 1.0 / inverse_mean[i];
  }
  return out;
}

}  // namespace randseries
