// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero if any fails.
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "randseries/cli.hpp"
#include "randseries/density.hpp"
#include "randseries/linmodel.hpp"
#include "randseries/oracle.hpp"
#include "randseries/regression.hpp"
#include "randseries/spectral.hpp"

using namespace randseries;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<double> log_prior_table(const DimensionPrior& prior) {
  std::vector<double> out;
  for (int j = prior.j_min(); j <= prior.j_max(); ++j) out.push_back(prior.log_pmf(j));
  return out;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// 1 ----------------------------------------------------------------------
Outcome basis_correctness() {
  const auto start = Clock::now();
  double unity = 0.0;
  double negative = 0.0;
  for (int q = 1; q <= 4; ++q) {
    for (int k = 1; k <= 40; ++k) {
      const SplineBasis basis(q, k);
      for (int i = 0; i < 10000; ++i) {
        const double x = i / 9999.0;
        const SparseBasisValues v = basis.evaluate(x);
        double sum = 0.0;
        for (double b : v.values) {
          sum += b;
          negative = std::max(negative, -b);
        }
        unity = std::max(unity, std::abs(sum - 1.0));
      }
    }
  }
  double integrals = 0.0;
  for (int q = 1; q <= 4; ++q) {
    for (int k : {1, 2, 3, 5, 8, 13, 21, 40}) {
      const SplineBasis basis(q, k);
      integrals = std::max(integrals, (basis_integrals(basis) - oracle::quadrature_integrals(basis)).cwiseAbs().maxCoeff());
    }
  }
  const double secs = seconds_since(start);
  return {unity <= 1e-12 && negative <= 1e-12 && integrals <= 1e-10 && secs < 5.0,
          "unity=" + fmt("%.2e", unity) + " negative=" + fmt("%.2e", negative) + " integrals=" +
              fmt("%.2e", integrals) + " time=" + fmt("%.2fs", secs)};
}

// 2 ----------------------------------------------------------------------
Outcome conjugacy() {
  const auto start = Clock::now();
  double worst = 0.0;

  // histogram with one bin per basis: Dirichlet-multinomial predictive
  const std::vector<double> data{0.05, 0.3, 0.32, 0.61, 0.9};
  for (int j : {1, 3, 4}) {
    DensityModel model{1, DimensionPrior::fixed(j), CoefficientPrior::dirichlet({1.5})};
    const Vector grid = linspace(0.01, 0.99, 17);
    const PosteriorEstimate est = fit_density(data, model, grid, Method::exact());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const int bin = std::min(j - 1, static_cast<int>(grid[i] * j));
      int count = 0;
      for (double d : data) count += std::min(j - 1, static_cast<int>(d * j)) == bin;
      const double expected = j * (1.5 + count) / (1.5 * j + static_cast<double>(data.size()));
      worst = std::max(worst, relative(est.mean[i], expected));
    }
  }

  const std::vector<double> series{0.4, -0.9, 1.3};
  const Periodogram p = periodogram(series);
  const std::vector<double> z{0.1, 0.35, 0.5, 0.72, 0.9};
  const std::vector<int> successes{1, 0, 1, 1, 0};
  const std::vector<int> counts{3, 0, 2, 5, 1};
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{2.5, 0.7}, std::pair{0.6, 3.0}}) {
    const Vector grid = linspace(0.0, 1.0, 5);
    SpectralModel sm{1, DimensionPrior::fixed(1), CoefficientPrior::gamma({a}, {b})};
    const Vector s = fit_inverse_spectral(p, sm, grid, Method::exact()).mean;
    BinaryModel bm{1, DimensionPrior::fixed(1), CoefficientPrior::beta({a}, {b})};
    const Vector bin = fit_binary(z, successes, bm, grid, Method::exact()).mean;
    PoissonModel pm{1, DimensionPrior::fixed(1), CoefficientPrior::gamma({a}, {b})};
    const Vector poi = fit_poisson(z, counts, pm, grid, Method::exact()).mean;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      worst = std::max(worst, relative(s[i], (a + 1.0) / (b + p.ordinates[0])));
      worst = std::max(worst, relative(bin[i], (a + 3.0) / (a + b + 5.0)));
      worst = std::max(worst, relative(poi[i], (a + 11.0) / (b + 5.0)));
    }
  }

  double noise = 0.0;
  SequenceModel wn;
  wn.observations = Vector::LinSpaced(8, -1.2, 2.1);
  wn.dimension_prior = DimensionPrior::fixed(8);
  for (double n : {1.0, 25.0, 400.0}) {
    for (double tau2 : {0.01, 1.0, 7.0}) {
      wn.n = n;
      wn.prior_variance = tau2;
      const Vector c = fit_whitenoise(wn).coefficients;
      const Vector expected = (n * tau2 / (n * tau2 + 1.0)) * wn.observations;
      noise = std::max(noise, (c - expected).cwiseAbs().maxCoeff());
    }
  }
  const double secs = seconds_since(start);
  return {worst <= 1e-10 && noise <= 1e-12 && secs < 5.0,
          "ratio_models=" + fmt("%.2e", worst) + " white_noise=" + fmt("%.2e", noise) + " time=" + fmt("%.2fs", secs)};
}

// 3 ----------------------------------------------------------------------
double density_vs_brute(const std::vector<double>& data, int order, int j_lo, int j_hi, double alpha) {
  DensityModel model{order, DimensionPrior::geometric(0.4, j_lo, j_hi), CoefficientPrior::dirichlet({alpha})};
  double worst = 0.0;
  for (double x : {0.05, 0.45, 0.9}) {
    const double engine = fit_density(data, model, Vector::Constant(1, x), Method::exact()).mean[0];
    std::vector<oracle::BruteResult> parts;
    for (int j = j_lo; j <= j_hi; ++j) parts.push_back(oracle::brute_posterior(oracle::density_problem(data, order, j, alpha, x)));
    worst = std::max(worst, relative(engine, oracle::brute_mixture(log_prior_table(model.dimension_prior), parts)));
  }
  return worst;
}

Outcome oracle_equivalence() {
  const auto start = Clock::now();
  double density = std::max(density_vs_brute({0.12, 0.47, 0.81}, 2, 2, 3, 1.5), density_vs_brute({0.6}, 3, 3, 3, 1.0));
  density = std::max(density, density_vs_brute({0.2, 0.25}, 1, 1, 3, 0.8));

  double binary = 0.0;
  {
    const std::vector<double> z{0.2, 0.55, 0.9};
    const std::vector<int> x{1, 0, 1};
    BinaryModel model{2, DimensionPrior::geometric(0.4, 2, 3), CoefficientPrior::beta({2.0}, {1.5})};
    for (double at : {0.1, 0.6}) {
      const double engine = fit_binary(z, x, model, Vector::Constant(1, at), Method::exact()).mean[0];
      std::vector<oracle::BruteResult> parts;
      for (int j = 2; j <= 3; ++j) parts.push_back(oracle::brute_posterior(oracle::binary_problem(z, x, 2, j, 2.0, 1.5, at)));
      binary = std::max(binary, relative(engine, oracle::brute_mixture(log_prior_table(model.dimension_prior), parts)));
    }
  }

  double poisson = 0.0;
  {
    const std::vector<double> z{0.3, 0.7, 0.75};
    const std::vector<int> x{2, 1, 0};
    PoissonModel model{2, DimensionPrior::geometric(0.4, 2, 3), CoefficientPrior::gamma({1.5}, {1.0})};
    for (double at : {0.25, 0.8}) {
      const double engine = fit_poisson(z, x, model, Vector::Constant(1, at), Method::exact()).mean[0];
      std::vector<oracle::BruteResult> parts;
      for (int j = 2; j <= 3; ++j) parts.push_back(oracle::brute_posterior(oracle::poisson_problem(z, x, 2, j, 1.5, 1.0, at)));
      poisson = std::max(poisson, relative(engine, oracle::brute_mixture(log_prior_table(model.dimension_prior), parts)));
    }
  }

  double spectral = 0.0;
  {
    const std::vector<double> series{0.3, -1.1, 0.8, 0.4, -0.2, 1.3, -0.9};  // three ordinates
    const Periodogram pgram = periodogram(series);
    SpectralModel model{2, DimensionPrior::geometric(0.4, 2, 3), CoefficientPrior::gamma({2.0}, {1.0})};
    const std::vector<double> freqs(pgram.frequencies.begin(), pgram.frequencies.end());
    const std::vector<double> ords(pgram.ordinates.begin(), pgram.ordinates.end());
    for (double at : {0.3, 0.75}) {
      const double engine = fit_inverse_spectral(pgram, model, Vector::Constant(1, at), Method::exact()).mean[0];
      std::vector<oracle::BruteResult> parts;
      for (int j = 2; j <= 3; ++j) {
        parts.push_back(oracle::brute_posterior(oracle::spectral_problem(freqs, ords, 2, j, 2.0, 1.0, at)));
      }
      spectral = std::max(spectral, relative(engine, oracle::brute_mixture(log_prior_table(model.dimension_prior), parts)));
    }
  }

  double gauss = 0.0;
  {
    const std::vector<double> z{0.15, 0.5, 0.85};
    const std::vector<double> x{0.4, 1.2, -0.3};
    GaussRegressionModel model;
    model.order = 2;
    model.dimension_prior = DimensionPrior::geometric(0.4, 2, 3);
    model.prior_variance = 2.0;
    model.noise_shape = 2.0;
    model.noise_scale = 1.0;
    for (double at : {0.3, 0.7}) {
      const double engine = fit_gauss_regression(model, z, x, Vector::Constant(1, at)).mean[0];
      std::vector<oracle::BruteResult> parts;
      for (int j = 2; j <= 3; ++j) parts.push_back(oracle::brute_posterior(oracle::gauss_problem(z, x, 2, j, 2.0, 2.0, 1.0, at)));
      gauss = std::max(gauss, relative(engine, oracle::brute_mixture(log_prior_table(model.dimension_prior), parts)));
    }
  }
  const double worst = std::max({density, binary, poisson, spectral, gauss});
  const double secs = seconds_since(start);
  return {worst <= 1e-3 && secs < 120.0,
          "density=" + fmt("%.1e", density) + " binary=" + fmt("%.1e", binary) + " poisson=" + fmt("%.1e", poisson) +
              " spectral=" + fmt("%.1e", spectral) + " gauss=" + fmt("%.1e", gauss) + " time=" + fmt("%.1fs", secs)};
}

// 4 ----------------------------------------------------------------------
struct Fixture {
  std::string name;
  std::function<double(const Method&)> mean;
  std::function<double(const Method&)> std_error;
};

Outcome calibration() {
  const auto start = Clock::now();
  const std::vector<double> dens{0.08, 0.3, 0.33, 0.6, 0.74, 0.95};
  const DensityModel dm{3, DimensionPrior::geometric(0.3, 3, 6), CoefficientPrior::dirichlet({1.0})};
  const std::vector<double> z{0.05, 0.2, 0.4, 0.55, 0.8, 0.97};
  const std::vector<int> succ{0, 1, 1, 0, 1, 1};
  const BinaryModel bm{2, DimensionPrior::geometric(0.3, 2, 5), CoefficientPrior::beta({1.0}, {1.0})};
  const std::vector<int> counts{1, 0, 3, 2, 0, 4};
  const PoissonModel pm{2, DimensionPrior::geometric(0.3, 2, 5), CoefficientPrior::gamma({1.0}, {1.0})};
  const std::vector<double> series{0.5, -1.2, 0.3, 0.9, -0.4, 1.1, -0.7, 0.2, 0.6, -1.0, 0.8, -0.1, 0.35};
  const Periodogram pg = periodogram(series);  // six ordinates
  const SpectralModel sm{2, DimensionPrior::geometric(0.3, 2, 5), CoefficientPrior::gamma({1.0}, {1.0})};

  struct Case {
    std::string name;
    std::function<PosteriorEstimate(const Method&)> fit;
  };
  const Vector at = Vector::Constant(1, 0.42);
  const std::vector<Case> cases{
      {"density", [&](const Method& m) { return fit_density(dens, dm, at, m); }},
      {"binary", [&](const Method& m) { return fit_binary(z, succ, bm, at, m); }},
      {"poisson", [&](const Method& m) { return fit_poisson(z, counts, pm, at, m); }},
      {"spectral", [&](const Method& m) { return fit_inverse_spectral(pg, sm, at, m); }},
  };
  bool pass = true;
  std::string detail;
  for (const auto& c : cases) {
    const double exact = c.fit(Method::exact()).mean[0];
    int within = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const PosteriorEstimate est = c.fit(Method::monte_carlo(100000, seed));
      within += std::abs(est.mean[0] - exact) <= 4.0 * est.std_error[0];
    }
    pass = pass && within >= 95;
    detail += c.name + "=" + std::to_string(within) + "/100 ";
  }
  const double secs = seconds_since(start);
  return {pass && secs < 300.0, detail + "time=" + fmt("%.1fs", secs)};
}

// 5 ----------------------------------------------------------------------
Outcome simulation() {
  cli::SimulationConfig cfg;
  cfg.replicates = 10;
  const auto start = Clock::now();
  const cli::SimulationReport report = cli::simulation_study(cfg);
  const double secs = seconds_since(start);
  return {report.median_mse <= 0.15 && report.worst_std_error > 0.0 && report.worst_std_error < 0.5 && secs < 600.0,
          "median_mse=" + fmt("%.4f", report.median_mse) + " max_stderr=" + fmt("%.4f", report.worst_std_error) +
              " replicates=10 time=" + fmt("%.1fs", secs)};
}

// 6 ----------------------------------------------------------------------
Outcome rates() {
  const auto start = Clock::now();
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
  const double secs = seconds_since(start);
  return {a >= -3.5 && a <= -2.5 && b >= -1.9 && b <= -1.1 && secs < 30.0,
          "sin_slope=" + fmt("%.3f", a) + " abs_pow_slope=" + fmt("%.3f", b) + " time=" + fmt("%.1fs", secs)};
}

// 7 ----------------------------------------------------------------------
Outcome spectral_sanity() {
  const auto start = Clock::now();
  Rng rng = make_rng(512, 0);
  std::normal_distribution<double> normal;
  std::vector<double> series(512);
  for (double& v : series) v = normal(rng);
  const Periodogram pg = periodogram(series);
  const SpectralModel model;
  const Vector grid = linspace(0.2, 0.8, 61);
  const PosteriorEstimate est = fit_inverse_spectral(pg, model, grid, Method::monte_carlo(1000, 3));
  const double target = 2.0 * std::numbers::pi;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) worst = std::max(worst, relative(est.mean[i], target));
  const double secs = seconds_since(start);
  return {worst <= 0.25 && secs < 120.0, "max_relative_error=" + fmt("%.3f", worst) + " time=" + fmt("%.1fs", secs)};
}

// 8 ----------------------------------------------------------------------
Outcome normalization() {
  const std::vector<std::vector<double>> samples{
      {0.5}, {0.0, 1.0}, {0.1, 0.15, 0.9}, {0.02, 0.4, 0.41, 0.77}, {0.3, 0.3, 0.3, 0.31, 0.7}, {0.02, 0.4, 0.41, 0.77, 0.93, 1.0}};
  const std::vector<DensityModel> models{
      {1, DimensionPrior::geometric(0.3, 1, 6), CoefficientPrior::dirichlet({1.0})},
      {2, DimensionPrior::geometric(0.2, 2, 7), CoefficientPrior::dirichlet({0.5})},
      {3, DimensionPrior::geometric(0.15, 3, 6), CoefficientPrior::dirichlet({1.0})},
      {4, DimensionPrior::poisson(5.0, 4, 7), CoefficientPrior::dirichlet({2.0})},
  };
  double worst = 0.0;
  int fixtures = 0;
  for (const auto& data : samples) {
    for (const auto& model : models) {
      const RatioEvaluator evaluator(density_spec(model, data), Method::exact());
      const double mass = oracle::quad_integrate([&](double x) { return evaluator.evaluate(x).value; }, 0.0, 1.0, 1e-12);
      worst = std::max(worst, std::abs(mass - 1.0));
      ++fixtures;
    }
  }
  return {worst <= 1e-8, "max_mass_error=" + fmt("%.2e", worst) + " fixtures=" + std::to_string(fixtures)};
}

// 9 ----------------------------------------------------------------------
std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string json_without_wall_time(const fs::path& path) {
  auto j = nlohmann::json::parse(slurp(path));
  j.erase("wall_time_s");
  return j.dump();
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("randseries_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream(dir / name) << body;
    return (dir / name).string();
  };
  std::string ts = "x\n";
  for (int i = 0; i < 40; ++i) ts += std::to_string(std::sin(0.7 * i) + 0.3 * std::cos(2.1 * i)) + "\n";
  const std::vector<std::vector<std::string>> runs{
      {"density", "--mc", "500", "--seed", "4", "--grid", "50", "--data",
       write("d.csv", "x\n0.12\n0.3\n0.31\n0.5\n0.77\n0.9\n0.93\n")},
      {"spectral", "--mc", "500", "--seed", "5", "--grid", "50", "--data", write("s.csv", ts)},
      {"binary", "--mc", "500", "--seed", "6", "--grid", "50", "--data", write("b.csv", "z,x\n0.1,0\n0.4,1\n0.6,1\n0.9,0\n")},
      {"poisson", "--mc", "500", "--seed", "7", "--grid", "50", "--data", write("p.csv", "z,x\n0.1,2\n0.4,0\n0.8,3\n")},
      {"repro-section9", "--replicates", "2", "--mc", "200", "--grid", "100", "--seed", "9"},
  };
  int identical = 0;
  std::string detail;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    std::string text[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = dir / ("run" + std::to_string(r) + "_" + std::to_string(rep) + ".csv");
      auto args = runs[r];
      args.insert(args.end(), {"--out", out.string()});
      std::ostringstream sink;
      std::ostringstream err;
      if (cli::run(args, sink, err) != cli::kOk) {
        detail += runs[r][0] + ":error ";
        text[rep] = "error" + std::to_string(rep);
        continue;
      }
      text[rep] = slurp(out) + json_without_wall_time(out.string() + ".json");
    }
    if (text[0] == text[1]) {
      ++identical;
    } else {
      detail += runs[r][0] + ":differs ";
    }
  }
  fs::remove_all(dir);
  return {identical == static_cast<int>(runs.size()),
          detail + "identical=" + std::to_string(identical) + "/" + std::to_string(runs.size())};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "basis_correctness", basis_correctness},   {2, "conjugacy_collapses", conjugacy},
      {3, "oracle_equivalence", oracle_equivalence}, {4, "exact_vs_mc_calibration", calibration},
      {5, "simulation_study", simulation},           {6, "approximation_rates", rates},
      {7, "spectral_white_noise", spectral_sanity},  {8, "density_normalization", normalization},
      {9, "mc_determinism", determinism},
  };
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  bool all = true;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.id << ' ' << c.name << ' ' << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
