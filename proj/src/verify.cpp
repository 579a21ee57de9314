#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <string>

#include "randseries/cli.hpp"
#include "randseries/density.hpp"
#include "randseries/io.hpp"
#include "randseries/linmodel.hpp"
#include "randseries/oracle.hpp"
#include "randseries/regression.hpp"
#include "randseries/spectral.hpp"

namespace randseries::cli {

namespace {

struct Check {
  std::string name;
  std::function<double()> deviation;  // returns the worst error found
  double tolerance;
};

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<double> log_prior_table(const DimensionPrior& prior) {
  std::vector<double> out;
  for (int j = prior.j_min(); j <= prior.j_max(); ++j) out.push_back(prior.log_pmf(j));
  return out;
}

double basis_vs_naive() {
  double worst = 0.0;
  for (int q = 1; q <= 4; ++q) {
    for (int k = 1; k <= 12; ++k) {
      const SplineBasis basis(q, k);
      for (int i = 0; i <= 200; ++i) {
        const double x = i / 200.0;
        worst = std::max(worst, (basis.dense(x) - oracle::naive_basis(basis, x)).cwiseAbs().maxCoeff());
      }
    }
  }
  return worst;
}

double integrals_vs_quadrature() {
  double worst = 0.0;
  for (int q = 1; q <= 4; ++q) {
    for (int k = 1; k <= 10; ++k) {
      const SplineBasis basis(q, k);
      worst = std::max(worst, (basis_integrals(basis) - oracle::quadrature_integrals(basis)).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

double periodogram_vs_reference() {
  Rng rng = make_rng(11, 0);
  std::normal_distribution<double> normal;
  std::vector<double> series(64);
  for (double& v : series) v = normal(rng);
  return (periodogram(series).ordinates - oracle::reference_periodogram(series)).cwiseAbs().maxCoeff();
}

double density_vs_brute() {
  const std::vector<double> data{0.12, 0.47, 0.81};
  DensityModel model;
  model.order = 2;
  model.dimension_prior = DimensionPrior::geometric(0.4, 2, 3);
  model.coefficient_prior = CoefficientPrior::dirichlet({1.5});
  double worst = 0.0;
  for (double x : {0.05, 0.5, 0.9}) {
    const double engine = fit_density(data, model, Vector::Constant(1, x), Method::exact()).mean[0];
    std::vector<oracle::BruteResult> parts;
    for (int j = 2; j <= 3; ++j) {
      parts.push_back(oracle::brute_posterior(oracle::density_problem(data, 2, j, 1.5, x)));
    }
    worst = std::max(worst, relative(engine, oracle::brute_mixture(log_prior_table(model.dimension_prior), parts)));
  }
  return worst;
}

double binary_vs_brute() {
  const std::vector<double> z{0.2, 0.55, 0.9};
  const std::vector<int> x{1, 0, 1};
  BinaryModel model{2, DimensionPrior::geometric(0.4, 2, 3), CoefficientPrior::beta({2.0}, {1.5})};
  double worst = 0.0;
  for (double at : {0.1, 0.6}) {
    const double engine = fit_binary(z, x, model, Vector::Constant(1, at), Method::exact()).mean[0];
    std::vector<oracle::BruteResult> parts;
    for (int j = 2; j <= 3; ++j) parts.push_back(oracle::brute_posterior(oracle::binary_problem(z, x, 2, j, 2.0, 1.5, at)));
    worst = std::max(worst, relative(engine, oracle::brute_mixture(log_prior_table(model.dimension_prior), parts)));
  }
  return worst;
}

double poisson_vs_brute() {
  const std::vector<double> z{0.3, 0.7};
  const std::vector<int> x{2, 1};
  PoissonModel model{2, DimensionPrior::geometric(0.4, 2, 3), CoefficientPrior::gamma({1.5}, {1.0})};
  double worst = 0.0;
  for (double at : {0.25, 0.8}) {
    const double engine = fit_poisson(z, x, model, Vector::Constant(1, at), Method::exact()).mean[0];
    std::vector<oracle::BruteResult> parts;
    for (int j = 2; j <= 3; ++j) parts.push_back(oracle::brute_posterior(oracle::poisson_problem(z, x, 2, j, 1.5, 1.0, at)));
    worst = std::max(worst, relative(engine, oracle::brute_mixture(log_prior_table(model.dimension_prior), parts)));
  }
  return worst;
}

double spectral_vs_brute() {
  const std::vector<double> series{0.3, -1.1, 0.8, 0.4, -0.2, 1.3, -0.9};
  const Periodogram pgram = periodogram(series);
  SpectralModel model{2, DimensionPrior::geometric(0.4, 2, 3), CoefficientPrior::gamma({2.0}, {1.0})};
  const std::vector<double> freqs(pgram.frequencies.begin(), pgram.frequencies.end());
  const std::vector<double> ords(pgram.ordinates.begin(), pgram.ordinates.end());
  double worst = 0.0;
  for (double at : {0.3, 0.75}) {
    const double engine = fit_inverse_spectral(pgram, model, Vector::Constant(1, at), Method::exact()).mean[0];
    std::vector<oracle::BruteResult> parts;
    for (int j = 2; j <= 3; ++j) {
      parts.push_back(oracle::brute_posterior(oracle::spectral_problem(freqs, ords, 2, j, 2.0, 1.0, at)));
    }
    worst = std::max(worst, relative(engine, oracle::brute_mixture(log_prior_table(model.dimension_prior), parts)));
  }
  return worst;
}

double gauss_vs_brute() {
  const std::vector<double> z{0.15, 0.5, 0.85};
  const std::vector<double> x{0.4, 1.2, -0.3};
  GaussRegressionModel model;
  model.order = 2;
  model.dimension_prior = DimensionPrior::geometric(0.4, 2, 3);
  model.prior_variance = 2.0;
  model.noise_shape = 2.0;
  model.noise_scale = 1.0;
  double worst = 0.0;
  for (double at : {0.3}) {
    const double engine = fit_gauss_regression(model, z, x, Vector::Constant(1, at)).mean[0];
    std::vector<oracle::BruteResult> parts;
    for (int j = 2; j <= 3; ++j) {
      parts.push_back(oracle::brute_posterior(oracle::gauss_problem(z, x, 2, j, 2.0, 2.0, 1.0, at)));
    }
    worst = std::max(worst, relative(engine, oracle::brute_mixture(log_prior_table(model.dimension_prior), parts)));
  }
  return worst;
}

double rate_slopes() {
  oracle::RateCheckConfig smooth;
  smooth.target = [](double x) { return std::sin(2.0 * std::numbers::pi * x); };
  smooth.smoothness = 3.0;
  smooth.ladder = {12, 16, 24, 32, 48, 64};
  oracle::RateCheckConfig rough;
  rough.target = [](double x) { return std::pow(std::abs(x - 0.5), 1.5); };
  rough.smoothness = 1.5;
  rough.ladder = {8, 12, 16, 24, 32, 48};
  const double a = oracle::approx_rate_slope(smooth).slope;
  const double b = oracle::approx_rate_slope(rough).slope;
  // distance outside the accepted slope windows
  const double da = std::max({0.0, -3.5 - a, a + 2.5});
  const double db = std::max({0.0, -1.9 - b, b + 1.1});
  return std::max(da, db);
}

}  // namespace

bool run_verification(std::ostream& out) {
  const std::vector<Check> checks{
      {"basis_vs_cox_de_boor", basis_vs_naive, 1e-12},
      {"basis_integrals_vs_quadrature", integrals_vs_quadrature, 1e-10},
      {"periodogram_vs_reference", periodogram_vs_reference, 1e-10},
      {"density_exact_vs_brute", density_vs_brute, 1e-3},
      {"binary_exact_vs_brute", binary_vs_brute, 1e-3},
      {"poisson_exact_vs_brute", poisson_vs_brute, 1e-3},
      {"spectral_exact_vs_brute", spectral_vs_brute, 1e-3},
      {"gauss_regression_vs_brute", gauss_vs_brute, 1e-3},
      {"approximation_rate_slopes", rate_slopes, 0.0},
  };
  bool all = true;
  for (const auto& check : checks) {
    double dev = 0.0;
    std::string note;
    try {
      dev = check.deviation();
    } catch (const std::exception& e) {
      dev = INFINITY;
      note = std::string(" (") + e.what() + ")";
    }
    const bool pass = dev <= check.tolerance;
    all = all && pass;
    out << (pass ? "PASS " : "FAIL ") << check.name << " deviation=" << io::format_double(dev)
        << " tolerance=" << io::format_double(check.tolerance) << note << '\n';
  }
  return all;
}

}  // namespace randseries::cli
