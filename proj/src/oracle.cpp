#include "randseries/oracle.hpp"

#include <complex>
#include <numbers>
#include <string>

#include "randseries/quadrature.hpp"

namespace randseries::oracle {

double quad_integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  return integrate_adaptive(f, a, b, tol, 100000);
}

double naive_bspline(const std::vector<double>& knots, int i, int order, double x) {
  const auto iu = static_cast<std::size_t>(i);
  if (order == 1) {
    if (knots[iu] <= x && x < knots[iu + 1]) return 1.0;
    // right end: the last interval of positive length is closed
    if (x == knots.back() && knots[iu] < knots[iu + 1] && knots[iu + 1] == knots.back()) return 1.0;
    return 0.0;
  }
  double out = 0.0;
  const double left_span = knots[iu + static_cast<std::size_t>(order) - 1] - knots[iu];
  if (left_span > 0.0) out += (x - knots[iu]) / left_span * naive_bspline(knots, i, order - 1, x);
  const double right_span = knots[iu + static_cast<std::size_t>(order)] - knots[iu + 1];
  if (right_span > 0.0) {
    out += (knots[iu + static_cast<std::size_t>(order)] - x) / right_span * naive_bspline(knots, i + 1, order - 1, x);
  }
  return out;
}

Vector naive_basis(const SplineBasis& basis, double x) {
  Vector out(basis.dimension());
  for (int i = 0; i < basis.dimension(); ++i) out[i] = naive_bspline(basis.knots(), i, basis.order(), x);
  return out;
}

Vector quadrature_integrals(const SplineBasis& basis, double tol) {
  Vector out(basis.dimension());
  const auto& knots = basis.knots();
  for (int i = 0; i < basis.dimension(); ++i) {
    // integrate piecewise between distinct knots so every panel is polynomial
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
      if (knots[k + 1] <= knots[k]) continue;
      total += quad_integrate([&](double x) { return naive_bspline(knots, i, basis.order(), x); }, knots[k],
                              knots[k + 1], tol);
    }
    out[i] = total;
  }
  return out;
}

namespace {

struct Mapped {
  Vector theta;
  double log_jacobian;
};

Mapped map_point(const BruteProblem& p, const std::vector<double>& u) {
  Mapped m{Vector(p.dimension), 0.0};
  if (p.simplex) {
    double remaining = 1.0;
    const int j = p.dimension;
    for (int k = 0; k + 1 < j; ++k) {
      const double v = u[static_cast<std::size_t>(k)];
      m.theta[k] = v * remaining;
      // d theta_k / d v_k = remaining
      m.log_jacobian += std::log(remaining);
      remaining *= 1.0 - v;
    }
    m.theta[j - 1] = remaining;
    return m;
  }
  for (int k = 0; k < p.dimension; ++k) {
    const double v = u[static_cast<std::size_t>(k)];
    switch (p.coordinates[static_cast<std::size_t>(k)]) {
      case Coordinate::unit:
        m.theta[k] = v;
        break;
      case Coordinate::positive:
        m.theta[k] = v / (1.0 - v);
        m.log_jacobian -= 2.0 * std::log1p(-v);
        break;
      case Coordinate::real:
        m.theta[k] = std::log(v) - std::log1p(-v);
        m.log_jacobian -= std::log(v) + std::log1p(-v);
        break;
    }
  }
  return m;
}

double integrate_box(int dims, const std::function<double(const std::vector<double>&)>& f,
                     const BruteOptions& options, double tol) {
  std::vector<double> u(static_cast<std::size_t>(dims), 0.5);
  if (options.rule == BruteOptions::Rule::tensor_gauss) {
    std::vector<double> nodes, weights;
    gauss_legendre(options.gauss_points, nodes, weights);
    std::vector<int> idx(static_cast<std::size_t>(dims), 0);
    double total = 0.0;
    while (true) {
      double w = 1.0;
      for (int d = 0; d < dims; ++d) {
        const auto k = static_cast<std::size_t>(idx[static_cast<std::size_t>(d)]);
        u[static_cast<std::size_t>(d)] = 0.5 * (nodes[k] + 1.0);
        w *= 0.5 * weights[k];
      }
      total += w * f(u);
      int d = 0;
      while (d < dims && ++idx[static_cast<std::size_t>(d)] == options.gauss_points) idx[static_cast<std::size_t>(d++)] = 0;
      if (d == dims) break;
    }
    return total;
  }
  std::function<double(int)> level = [&](int d) -> double {
    if (d == dims) return f(u);
    return integrate_adaptive(
        [&, d](double t) {
          u[static_cast<std::size_t>(d)] = t;
          return level(d + 1);
        },
        0.0, 1.0, tol * std::pow(0.1, d), 200000);
  };
  return level(0);
}

double log_gamma_density(double theta, double a, double b) {
  return a * std::log(b) - log_gamma(a) + (a - 1.0) * std::log(theta) - b * theta;
}

}  // namespace

BruteResult brute_posterior(const BruteProblem& problem, const BruteOptions& options) {
  const int box_dims = problem.simplex ? problem.dimension - 1 : problem.dimension;
  if (!problem.simplex && static_cast<int>(problem.coordinates.size()) != problem.dimension) {
    throw ConfigError("brute_posterior: one coordinate kind per dimension required");
  }
  if (options.rule == BruteOptions::Rule::adaptive && box_dims > options.max_dimension) {
    throw ConfigError("brute_posterior: dimension " + std::to_string(box_dims) + " above the oracle cap");
  }
  if (box_dims == 0) {
    Vector theta = Vector::Ones(1);
    return {problem.log_prior(theta) + problem.log_likelihood(theta), problem.functional(theta)};
  }

  auto log_integrand = [&](const std::vector<double>& u, Vector* theta_out) {
    Mapped m = map_point(problem, u);
    for (double t : m.theta) {
      if (!std::isfinite(t)) return kNegInf;
    }
    const double v = problem.log_prior(m.theta) + problem.log_likelihood(m.theta) + m.log_jacobian;
    if (theta_out) *theta_out = std::move(m.theta);
    return std::isnan(v) ? kNegInf : v;
  };

  // reference level so the integrand is O(1) near its peak
  double ref = kNegInf;
  {
    BruteOptions coarse = options;
    coarse.rule = BruteOptions::Rule::tensor_gauss;
    coarse.gauss_points = box_dims <= 3 ? 15 : 9;
    integrate_box(box_dims, [&](const std::vector<double>& u) {
      ref = std::max(ref, log_integrand(u, nullptr));
      return 0.0;
    }, coarse, 0.0);
  }
  if (!std::isfinite(ref)) throw NumericalError("brute_posterior: integrand vanishes on the probe grid");

  auto evidence_fn = [&](const std::vector<double>& u) { return std::exp(log_integrand(u, nullptr) - ref); };
  auto moment_fn = [&](const std::vector<double>& u) {
    Vector theta;
    const double lv = log_integrand(u, &theta);
    return lv == kNegInf ? 0.0 : std::exp(lv - ref) * problem.functional(theta);
  };

  BruteOptions rough = options;
  rough.rule = BruteOptions::Rule::tensor_gauss;
  rough.gauss_points = box_dims <= 3 ? 16 : 12;
  const double scale = integrate_box(box_dims, evidence_fn, rough, 0.0);
  const double tol = options.relative_tolerance * std::max(std::abs(scale), 1e-300);
  const double evidence = integrate_box(box_dims, evidence_fn, options, tol);
  const double moment_scale = std::abs(integrate_box(box_dims, moment_fn, rough, 0.0));
  const double moment = integrate_box(box_dims, moment_fn, options,
                                      options.relative_tolerance * std::max(moment_scale, 1e-3 * std::abs(scale)));
  if (!(evidence > 0.0)) throw NumericalError("brute_posterior: nonpositive evidence");
  return {ref + std::log(evidence), moment / evidence};
}

double brute_mixture(const std::vector<double>& log_prior, const std::vector<BruteResult>& results,
                     std::vector<double>* dimension_posterior) {
  LogSumExp norm;
  for (std::size_t i = 0; i < results.size(); ++i) norm.add(log_prior[i] + results[i].log_evidence);
  double mean = 0.0;
  if (dimension_posterior) dimension_posterior->clear();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const double w = std::exp(log_prior[i] + results[i].log_evidence - norm.value());
    if (dimension_posterior) dimension_posterior->push_back(w);
    mean += w * results[i].mean;
  }
  return mean;
}

BruteProblem density_problem(std::span<const double> data, int order, int j, double concentration, double x,
                             int power) {
  const SplineBasis basis = SplineBasis::with_dimension(order, j);
  const Vector integrals = quadrature_integrals(basis);
  std::vector<Vector> rows;
  for (double v : data) rows.push_back(naive_basis(basis, v).cwiseQuotient(integrals));
  const Vector at = naive_basis(basis, x).cwiseQuotient(integrals);
  BruteProblem p;
  p.dimension = j;
  p.simplex = true;
  p.log_prior = [j, concentration](const Vector& theta) {
    double out = log_gamma(j * concentration) - j * log_gamma(concentration);
    for (double t : theta) out += (concentration - 1.0) * std::log(t);
    return out;
  };
  p.log_likelihood = [rows](const Vector& theta) {
    double out = 0.0;
    for (const auto& r : rows) out += std::log(theta.dot(r));
    return out;
  };
  p.functional = [at, power](const Vector& theta) { return std::pow(theta.dot(at), power); };
  return p;
}

BruteProblem binary_problem(std::span<const double> z, std::span<const int> x, int order, int j, double a,
                            double b, double at) {
  const SplineBasis basis = SplineBasis::with_dimension(order, j);
  std::vector<std::pair<Vector, int>> rows;
  for (std::size_t i = 0; i < z.size(); ++i) rows.emplace_back(naive_basis(basis, z[i]), x[i]);
  const Vector point = naive_basis(basis, at);
  BruteProblem p;
  p.dimension = j;
  p.coordinates.assign(static_cast<std::size_t>(j), Coordinate::unit);
  p.log_prior = [a, b](const Vector& theta) {
    double out = 0.0;
    for (double t : theta) out += (a - 1.0) * std::log(t) + (b - 1.0) * std::log1p(-t) - log_beta(a, b);
    return out;
  };
  p.log_likelihood = [rows](const Vector& theta) {
    double out = 0.0;
    for (const auto& [r, y] : rows) {
      const double prob = theta.dot(r);
      out += y == 1 ? std::log(prob) : std::log1p(-prob);
    }
    return out;
  };
  p.functional = [point](const Vector& theta) { return theta.dot(point); };
  return p;
}

BruteProblem poisson_problem(std::span<const double> z, std::span<const int> x, int order, int j, double a,
                             double b, double at) {
  const SplineBasis basis = SplineBasis::with_dimension(order, j);
  std::vector<std::pair<Vector, int>> rows;
  for (std::size_t i = 0; i < z.size(); ++i) rows.emplace_back(naive_basis(basis, z[i]), x[i]);
  const Vector point = naive_basis(basis, at);
  BruteProblem p;
  p.dimension = j;
  p.coordinates.assign(static_cast<std::size_t>(j), Coordinate::positive);
  p.log_prior = [a, b](const Vector& theta) {
    double out = 0.0;
    for (double t : theta) out += log_gamma_density(t, a, b);
    return out;
  };
  p.log_likelihood = [rows](const Vector& theta) {
    double out = 0.0;
    for (const auto& [r, count] : rows) {
      const double mu = theta.dot(r);
      out += (count > 0 ? count * std::log(mu) : 0.0) - mu - log_gamma(count + 1.0);
    }
    return out;
  };
  p.functional = [point](const Vector& theta) { return theta.dot(point); };
  return p;
}

BruteProblem spectral_problem(std::span<const double> frequencies, std::span<const double> ordinates, int order,
                              int j, double a, double b, double at) {
  const SplineBasis basis = SplineBasis::with_dimension(order, j);
  std::vector<std::pair<Vector, double>> rows;
  for (std::size_t i = 0; i < frequencies.size(); ++i) rows.emplace_back(naive_basis(basis, frequencies[i]), ordinates[i]);
  const Vector point = naive_basis(basis, at);
  BruteProblem p;
  p.dimension = j;
  p.coordinates.assign(static_cast<std::size_t>(j), Coordinate::positive);
  p.log_prior = [a, b](const Vector& theta) {
    double out = 0.0;
    for (double t : theta) out += log_gamma_density(t, a, b);
    return out;
  };
  // exponential ordinates with mean f; theta^T B models 1/f
  p.log_likelihood = [rows](const Vector& theta) {
    double out = 0.0;
    for (const auto& [r, u] : rows) {
      const double inv = theta.dot(r);
      out += std::log(inv) - u * inv;
    }
    return out;
  };
  p.functional = [point](const Vector& theta) { return theta.dot(point); };
  return p;
}

BruteProblem gauss_problem(std::span<const double> z, std::span<const double> x, int order, int j, double tau2,
                           double shape, double scale, double at) {
  const SplineBasis basis = SplineBasis::with_dimension(order, j);
  std::vector<std::pair<Vector, double>> rows;
  for (std::size_t i = 0; i < z.size(); ++i) rows.emplace_back(naive_basis(basis, z[i]), x[i]);
  const Vector point = naive_basis(basis, at);
  const double m = static_cast<double>(j + static_cast<int>(rows.size()));
  BruteProblem p;
  p.dimension = j;
  p.coordinates.assign(static_cast<std::size_t>(j), Coordinate::real);
  // sigma^2 integrated out in closed form: the inverse-gamma kernel against
  // the joint Gaussian prior x likelihood in (theta, X)
  p.log_prior = [](const Vector&) { return 0.0; };
  p.log_likelihood = [rows, j, tau2, shape, scale, m](const Vector& v) {
    double quad = v.squaredNorm() / tau2;
    for (const auto& [r, y] : rows) {
      const double resid = y - v.dot(r);
      quad += resid * resid;
    }
    return shape * std::log(scale) - log_gamma(shape) - 0.5 * m * std::log(2.0 * std::numbers::pi) -
           0.5 * j * std::log(tau2) + log_gamma(shape + 0.5 * m) - (shape + 0.5 * m) * std::log(scale + 0.5 * quad);
  };
  p.functional = [point](const Vector& v) { return v.dot(point); };
  return p;
}

RateCheck approx_rate_slope(const RateCheckConfig& config) {
  if (!(config.smoothness > 0.0) || config.smoothness > config.order) {
    throw ConfigError("rate check needs 0 < smoothness <= order");
  }
  for (std::size_t i = 1; i < config.ladder.size(); ++i) {
    if (config.ladder[i] <= config.ladder[i - 1]) throw ConfigError("rate check ladder must be strictly increasing");
  }
  const Vector grid = linspace(0.0, 1.0, 10000);
  std::vector<double> xs(grid.data(), grid.data() + grid.size());
  std::vector<double> ys;
  for (double x : xs) ys.push_back(config.target(x));

  RateCheck out;
  for (int J : config.ladder) {
    const SplineBasis basis = SplineBasis::with_dimension(config.order, J);
    const Vector theta = least_squares_fit(basis, xs, ys);
    double sup = 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double e = std::abs(basis.combine(theta, xs[i]) - ys[i]);
      sup = std::max(sup, e);
      sq += e * e;
    }
    const double err = config.norm == RateCheckConfig::Norm::sup ? sup : std::sqrt(sq / static_cast<double>(xs.size()));
    out.all_errors.push_back(err);
    if (err < 1e-13) continue;
    out.dimensions.push_back(J);
    out.errors.push_back(err);
  }
  if (out.dimensions.size() < 3) {
    throw NumericalError("rate check has fewer than 3 ladder points above the machine floor");
  }
  const auto m = static_cast<double>(out.dimensions.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < out.dimensions.size(); ++i) {
    const double lx = std::log(static_cast<double>(out.dimensions[i]));
    const double ly = std::log(out.errors[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return out;
}

Vector reference_periodogram(std::span<const double> series) {
  const auto n = static_cast<int>(series.size());
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= n;
  const int nu = n / 2;
  Vector out(nu);
  for (int j = 1; j <= nu; ++j) {
    const double omega = 2.0 * j / n;
    std::complex<double> sum = 0.0;
    for (int t = 1; t <= n; ++t) {
      sum += (series[static_cast<std::size_t>(t - 1)] - mean) *
             std::exp(std::complex<double>(0.0, -t * std::numbers::pi * omega));
    }
    out[j - 1] = std::norm(sum) / (2.0 * std::numbers::pi * n);
  }
  return out;
}

}  // namespace randseries::oracle
