#include <doctest.h>

#include <cmath>
#include <numbers>

#include "randseries/oracle.hpp"

using namespace randseries;

TEST_CASE("adaptive quadrature basics") {
  CHECK(oracle::quad_integrate([](double) { return 1.0; }, 0.0, 1.0, 1e-12) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(oracle::quad_integrate([](double x) { return x * x; }, 0.0, 1.0, 1e-12) - 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(oracle::quad_integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-10) - 2.0 / 3.0) < 1e-10);
  CHECK_THROWS_AS(oracle::quad_integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-12), NumericalError);
}

TEST_CASE("quadrature of basis functions matches the closed form") {
  const SplineBasis basis(3, 5);
  const Vector q = oracle::quadrature_integrals(basis);
  CHECK((q - basis_integrals(basis)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("naive basis is a partition of unity") {
  for (int q = 1; q <= 4; ++q) {
    const SplineBasis basis(q, 3);
    for (double x : {0.0, 1.0 / 3.0, 0.5, 1.0}) CHECK(oracle::naive_basis(basis, x).sum() == doctest::Approx(1.0));
  }
}

TEST_CASE("brute force conjugate checks") {
  const std::vector<double> one{0.3};
  // two bins, one datum in bin 0: posterior Dir(2,1), density at x in bin 0 is 2 * 2/3
  const auto d = oracle::brute_posterior(oracle::density_problem(one, 1, 2, 1.0, 0.2));
  CHECK(std::abs(d.mean - 4.0 / 3.0) < 1e-6);

  const auto b = oracle::brute_posterior(
      oracle::binary_problem(std::vector<double>{0.1, 0.5, 0.9}, std::vector<int>{1, 1, 0}, 1, 1, 1.0, 1.0, 0.5));
  CHECK(std::abs(b.mean - 0.6) < 1e-6);

  const auto p = oracle::brute_posterior(
      oracle::poisson_problem(std::vector<double>{0.5}, std::vector<int>{2}, 1, 1, 1.0, 1.0, 0.5));
  CHECK(std::abs(p.mean - 1.5) < 1e-6);

  for (auto [a, bb] : {std::pair{1.0, 1.0}, std::pair{2.0, 3.0}, std::pair{0.5, 0.2}}) {
    const auto s = oracle::brute_posterior(
        oracle::spectral_problem(std::vector<double>{0.5}, std::vector<double>{0.8}, 1, 1, a, bb, 0.5));
    CHECK(std::abs(s.mean - (a + 1.0) / (bb + 0.8)) < 1e-6 * s.mean);
  }
}

TEST_CASE("tensor rule agrees with adaptive rule") {
  const std::vector<double> data{0.2, 0.7, 0.75};
  oracle::BruteOptions tensor;
  tensor.rule = oracle::BruteOptions::Rule::tensor_gauss;
  const auto a = oracle::brute_posterior(oracle::density_problem(data, 2, 3, 1.0, 0.7));
  const auto t = oracle::brute_posterior(oracle::density_problem(data, 2, 3, 1.0, 0.7), tensor);
  CHECK(std::abs(a.mean - t.mean) < 1e-6);
  CHECK(std::abs(a.log_evidence - t.log_evidence) < 1e-6);
}

TEST_CASE("dimension cap") {
  const std::vector<double> data{0.5};
  CHECK_THROWS_AS(oracle::brute_posterior(oracle::density_problem(data, 1, 7, 1.0, 0.5)), ConfigError);
}

TEST_CASE("mixture over dimensions") {
  const std::vector<oracle::BruteResult> parts{{std::log(2.0), 1.0}, {std::log(1.0), 4.0}};
  std::vector<double> post;
  const double mean = oracle::brute_mixture({std::log(0.5), std::log(0.5)}, parts, &post);
  CHECK(mean == doctest::Approx(2.0));
  CHECK(post[0] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("approximation rate slopes") {
  oracle::RateCheckConfig smooth;
  smooth.target = [](double x) { return std::sin(2.0 * std::numbers::pi * x); };
  smooth.smoothness = 3.0;
  smooth.ladder = {12, 16, 24, 32, 48, 64};
  const auto a = oracle::approx_rate_slope(smooth);
  CHECK(a.slope >= -3.5);
  CHECK(a.slope <= -2.5);
  CHECK(oracle::approx_rate_slope(smooth).slope == a.slope);

  oracle::RateCheckConfig rough;
  rough.target = [](double x) { return std::pow(std::abs(x - 0.5), 1.5); };
  rough.smoothness = 1.5;
  rough.ladder = {8, 12, 16, 24, 32, 48};
  const double b = oracle::approx_rate_slope(rough).slope;
  CHECK(b >= -1.9);
  CHECK(b <= -1.1);

  oracle::RateCheckConfig exact;
  exact.target = [](double x) { return 1.0 + 2.0 * x - x * x; };
  exact.smoothness = 3.0;
  exact.ladder = {4, 8, 16};
  CHECK_THROWS_AS(oracle::approx_rate_slope(exact), NumericalError);

  rough.ladder = {8, 8, 12};
  CHECK_THROWS_AS(oracle::approx_rate_slope(rough), ConfigError);
}

TEST_CASE("reference periodogram") {
  CHECK(oracle::reference_periodogram(std::vector<double>(8, 0.0)).isZero());
  const Vector alt = oracle::reference_periodogram(std::vector<double>{1.0, -1.0, 1.0, -1.0});
  CHECK(alt[1] == doctest::Approx(2.0 / std::numbers::pi));
}
