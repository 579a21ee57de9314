#include <doctest.h>

#include <cmath>

#include "randseries/oracle.hpp"
#include "randseries/regression.hpp"

using namespace randseries;

TEST_CASE("beta-binomial collapse") {
  const std::vector<double> z{0.1, 0.4, 0.5, 0.9, 0.95};
  const std::vector<int> x{1, 1, 0, 1, 0};
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{2.0, 5.0}, std::pair{0.5, 0.5}}) {
    const BinaryModel model{1, DimensionPrior::fixed(1), CoefficientPrior::beta({a}, {b})};
    const PosteriorEstimate est = fit_binary(z, x, model, linspace(0.0, 1.0, 4), Method::exact());
    for (Eigen::Index i = 0; i < 4; ++i) CHECK(std::abs(est.mean[i] - (a + 3.0) / (a + b + 5.0)) < 1e-10);
  }
  const auto brute = oracle::brute_posterior(
      oracle::binary_problem(std::vector<double>{0.2, 0.5, 0.7}, std::vector<int>{1, 1, 0}, 1, 1, 1.0, 1.0, 0.5));
  CHECK(brute.mean == doctest::Approx(3.0 / 5.0).epsilon(1e-6));
}

TEST_CASE("binary prior mean") {
  const BinaryModel model{2, DimensionPrior::geometric(0.3, 2, 5), CoefficientPrior::beta({1.0}, {1.0})};
  const PosteriorEstimate est = fit_binary({}, {}, model, linspace(0.0, 1.0, 6), Method::exact());
  for (Eigen::Index i = 0; i < 6; ++i) CHECK(est.mean[i] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("binary exact against quadrature") {
  const std::vector<double> z{0.2, 0.5, 0.85};
  const std::vector<int> x{0, 1, 1};
  const BinaryModel model{2, DimensionPrior::fixed(2), CoefficientPrior::beta({1.0}, {1.0})};
  for (double at : {0.0, 0.4, 1.0}) {
    const double engine = fit_binary(z, x, model, Vector::Constant(1, at), Method::exact()).mean[0];
    const double brute = oracle::brute_posterior(oracle::binary_problem(z, x, 2, 2, 1.0, 1.0, at)).mean;
    CHECK(std::abs(engine - brute) < 1e-3 * brute);
  }
}

TEST_CASE("label flip symmetry") {
  const std::vector<double> z{0.05, 0.3, 0.6, 0.62, 0.9};
  const std::vector<int> x{1, 0, 0, 1, 1};
  std::vector<int> flipped;
  for (int v : x) flipped.push_back(1 - v);
  const BinaryModel model{2, DimensionPrior::geometric(0.3, 2, 4), CoefficientPrior::beta({1.5}, {1.5})};
  const Vector grid = linspace(0.0, 1.0, 9);
  const Vector a = fit_binary(z, x, model, grid, Method::exact()).mean;
  const Vector b = fit_binary(z, flipped, model, grid, Method::exact()).mean;
  CHECK((a + b - Vector::Ones(9)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(a.minCoeff() >= 0.0);
  CHECK(a.maxCoeff() <= 1.0);
}

TEST_CASE("gamma-poisson collapse") {
  const std::vector<double> z{0.3, 0.6, 0.7};
  const std::vector<int> x{2, 0, 5};
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{3.0, 0.5}, std::pair{0.5, 2.0}}) {
    const PoissonModel model{1, DimensionPrior::fixed(1), CoefficientPrior::gamma({a}, {b})};
    const PosteriorEstimate est = fit_poisson(z, x, model, linspace(0.0, 1.0, 3), Method::exact());
    for (Eigen::Index i = 0; i < 3; ++i) CHECK(std::abs(est.mean[i] - (a + 7.0) / (b + 3.0)) < 1e-10);
    const std::vector<int> zeros{0, 0, 0};
    const PosteriorEstimate none = fit_poisson(z, zeros, model, linspace(0.0, 1.0, 3), Method::exact());
    CHECK(std::abs(none.mean[1] - a / (b + 3.0)) < 1e-10);
  }
  const auto brute = oracle::brute_posterior(
      oracle::poisson_problem(std::vector<double>{0.4}, std::vector<int>{2}, 1, 1, 1.0, 1.0, 0.5));
  CHECK(brute.mean == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("poisson exact against quadrature") {
  const std::vector<double> z{0.3, 0.7};
  const std::vector<int> x{2, 1};
  const PoissonModel model{2, DimensionPrior::fixed(3), CoefficientPrior::gamma({1.0}, {1.0})};
  for (double at : {0.1, 0.5}) {
    const double engine = fit_poisson(z, x, model, Vector::Constant(1, at), Method::exact()).mean[0];
    const double brute = oracle::brute_posterior(oracle::poisson_problem(z, x, 2, 3, 1.0, 1.0, at)).mean;
    CHECK(std::abs(engine - brute) < 1e-3 * brute);
  }
}

TEST_CASE("multinomial expansion of observation slots") {
  const PoissonModel model{3, DimensionPrior::fixed(6), CoefficientPrior::gamma({1.0}, {1.0})};
  const std::vector<double> z{0.37};
  for (int count : {1, 3, 6}) {
    const RatioSumSpec spec = poisson_spec(model, z, std::vector<int>{count});
    const Slot& slot = spec.terms[0].slots[0];
    double total = 0.0;
    for (const auto& c : slot.candidates()) total += c.weight;
    CHECK(std::abs(std::tgamma(count + 1.0) * total - 1.0) < 1e-12);
  }
}

TEST_CASE("poisson estimates are nonnegative in both modes") {
  const std::vector<double> z{0.1, 0.2, 0.5, 0.8};
  const std::vector<int> x{0, 3, 1, 4};
  const PoissonModel model{2, DimensionPrior::geometric(0.3, 2, 4), CoefficientPrior::gamma({1.0}, {1.0})};
  const Vector grid = linspace(0.0, 1.0, 11);
  CHECK(fit_poisson(z, x, model, grid, Method::exact()).mean.minCoeff() >= 0.0);
  CHECK(fit_poisson(z, x, model, grid, Method::monte_carlo(500, 2)).mean.minCoeff() >= 0.0);
}

TEST_CASE("input validation") {
  const BinaryModel bm;
  CHECK_THROWS_AS(fit_binary(std::vector<double>{0.2}, std::vector<int>{2}, bm, linspace(0, 1, 3), Method::exact()),
                  ConfigError);
  CHECK_THROWS_AS(fit_binary(std::vector<double>{0.2, 0.4}, std::vector<int>{1}, bm, linspace(0, 1, 3), Method::exact()),
                  ConfigError);
  const PoissonModel pm;
  CHECK_THROWS_AS(fit_poisson(std::vector<double>{0.2}, std::vector<int>{-1}, pm, linspace(0, 1, 3), Method::exact()),
                  ConfigError);
  CHECK_THROWS_AS(fit_poisson(std::vector<double>{1.5}, std::vector<int>{1}, pm, linspace(0, 1, 3), Method::exact()),
                  ConfigError);
}
