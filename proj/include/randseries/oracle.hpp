#pragma once

#include <functional>
#include <span>
#include <vector>

#include "randseries/common.hpp"
#include "randseries/spline_basis.hpp"

/// Independent reference computations: slow, literal, and deliberately free of
/// the engine's enumeration and sampling paths.
namespace randseries::oracle {

/// Adaptive Gauss-Kronrod quadrature with absolute error target tol.
double quad_integrate(const std::function<double(double)>& f, double a, double b, double tol);

/// Textbook Cox-de Boor recursion for B_{i,order}(x) on the given knots; the
/// last nonempty interval is closed on the right.
double naive_bspline(const std::vector<double>& knots, int i, int order, double x);

/// All J basis values by the naive recursion.
Vector naive_basis(const SplineBasis& basis, double x);

/// Integrals of the basis functions by adaptive quadrature of the naive basis.
Vector quadrature_integrals(const SplineBasis& basis, double tol = 1e-13);

enum class Coordinate { unit, positive, real };

/// Posterior expectation of a functional by direct integration over theta.
/// With simplex set, theta lives on the (dimension-1)-simplex and is
/// parametrized by stick breaking; otherwise each coordinate is mapped from
/// (0,1) according to its Coordinate kind.
struct BruteProblem {
  int dimension = 1;
  bool simplex = false;
  std::vector<Coordinate> coordinates;
  std::function<double(const Vector&)> log_prior;
  std::function<double(const Vector&)> log_likelihood;
  std::function<double(const Vector&)> functional = [](const Vector&) { return 1.0; };
};

struct BruteOptions {
  enum class Rule { adaptive, tensor_gauss };
  Rule rule = Rule::adaptive;
  double relative_tolerance = 1e-5;
  int gauss_points = 12;
  int max_dimension = 4;
};

struct BruteResult {
  double log_evidence = 0.0;  ///< log integral of prior x likelihood
  double mean = 0.0;          ///< E[functional | data]
};

BruteResult brute_posterior(const BruteProblem& problem, const BruteOptions& options = {});

/// Mixes per-dimension brute results with log prior masses: returns the
/// posterior mean and fills the dimension posterior.
double brute_mixture(const std::vector<double>& log_prior, const std::vector<BruteResult>& results,
                     std::vector<double>* dimension_posterior = nullptr);

// Problem builders for each model family. `power` raises the evaluated
// function value (2 gives the second moment).
BruteProblem density_problem(std::span<const double> data, int order, int j, double concentration, double x,
                             int power = 1);
BruteProblem binary_problem(std::span<const double> z, std::span<const int> x, int order, int j, double a,
                            double b, double at);
BruteProblem poisson_problem(std::span<const double> z, std::span<const int> x, int order, int j, double a,
                             double b, double at);
BruteProblem spectral_problem(std::span<const double> frequencies, std::span<const double> ordinates, int order,
                              int j, double a, double b, double at);
BruteProblem gauss_problem(std::span<const double> z, std::span<const double> x, int order, int j, double tau2,
                           double shape, double scale, double at);

struct RateCheckConfig {
  enum class Norm { sup, l2 };
  std::function<double(double)> target;
  double smoothness = 1.0;  ///< Holder exponent of the target
  int order = 3;
  std::vector<int> ladder;  ///< strictly increasing basis dimensions
  Norm norm = Norm::sup;
};

struct RateCheck {
  double slope = 0.0;
  std::vector<int> dimensions;  ///< ladder entries above the machine floor
  std::vector<double> errors;
  std::vector<double> all_errors;
};

/// Slope of log approximation error against log J over the ladder.
RateCheck approx_rate_slope(const RateCheckConfig& config);

/// Periodogram by a literal double loop with complex exponentials (mean removed).
Vector reference_periodogram(std::span<const double> series);

}  // namespace randseries::oracle
