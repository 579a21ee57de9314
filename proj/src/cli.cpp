#include "randseries/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "randseries/density.hpp"
#include "randseries/io.hpp"
#include "randseries/linmodel.hpp"
#include "randseries/regression.hpp"
#include "randseries/spectral.hpp"

namespace randseries::cli {

namespace {

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::string data;
  std::string responses;
  std::string out;
  std::string diagnostics;
  int order = 3;
  std::string dim_prior = "geom:0.15:5:12";
  std::string coef_prior;
  int mc_samples = 0;
  std::uint64_t seed = 1;
  bool uniform_sampling = false;
  double budget = 1e8;
  int grid = 1000;
  std::string transform = "none";
  double grid_min = -3.0;
  double grid_max = 3.0;
  double tau2 = 1.0;
  double noise_shape = 1.0;
  double noise_scale = 1.0;
  double sigma_min = 0.0;
  double noise_n = 1.0;
  int replicates = 10;
  int verbosity = 0;
};

Method method_of(const RunConfig& cfg) {
  if (cfg.mc_samples == 0) return Method::exact(cfg.budget);
  Method m = Method::monte_carlo(cfg.mc_samples, cfg.seed);
  if (cfg.uniform_sampling) m.sampling = Sampling::uniform;
  return m;
}

void validate(const RunConfig& cfg) {
  if (cfg.grid < 2) throw ConfigError("--grid must be >= 2");
  if (cfg.mc_samples != 0 && cfg.mc_samples < 2) throw ConfigError("--mc sample count N must be >= 2");
  if (cfg.order < 1) throw ConfigError("--q must be >= 1");
  if (!(cfg.budget >= 1.0)) throw ConfigError("--budget must be >= 1");
}

Json config_echo(const RunConfig& cfg) {
  Json j;
  j["command"] = cfg.command;
  j["data"] = cfg.data;
  if (!cfg.responses.empty()) j["responses"] = cfg.responses;
  j["q"] = cfg.order;
  j["dim_prior"] = cfg.dim_prior;
  j["dim_prior_convention"] = "geometric pmf p(1-p)^(j-1) on j>=1, truncated to [lo,hi] and renormalized";
  j["coef_prior"] = cfg.coef_prior;
  j["method"] = cfg.mc_samples ? "mc" : "exact";
  if (cfg.mc_samples) {
    j["mc_samples"] = cfg.mc_samples;
    j["seed"] = cfg.seed;
    j["sampling"] = cfg.uniform_sampling ? "uniform" : "weighted";
  } else {
    j["budget"] = cfg.budget;
  }
  j["grid"] = cfg.grid;
  return j;
}

Json dimension_table(const PosteriorEstimate& est) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < est.dimensions.size(); ++i) {
    arr.push_back({{"j", est.dimensions[i]}, {"probability", est.dimension_posterior[i]}});
  }
  return arr;
}

std::string diagnostics_path(const RunConfig& cfg) {
  return cfg.diagnostics.empty() ? cfg.out + ".json" : cfg.diagnostics;
}

void write_diagnostics(const RunConfig& cfg, Json body, double wall) {
  body["wall_time_s"] = wall;
  io::write_text(diagnostics_path(cfg), body.dump(2) + "\n");
}

std::vector<int> to_counts(const std::vector<double>& column, const char* what) {
  std::vector<int> out;
  for (double v : column) {
    if (v != std::floor(v) || v < 0.0 || v > 1e9) {
      throw ConfigError(std::string(what) + " must be a nonnegative integer, got " + io::format_double(v));
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

Json estimate_diagnostics(const RunConfig& cfg, const PosteriorEstimate& est) {
  Json j;
  j["config"] = config_echo(cfg);
  j["dimension_posterior"] = dimension_table(est);
  j["seed"] = cfg.seed;
  j["max_stderr"] = est.max_std_error();
  return j;
}

void run_density(const RunConfig& cfg) {
  DensityModel model;
  model.order = cfg.order;
  model.dimension_prior = DimensionPrior::parse(cfg.dim_prior);
  model.coefficient_prior = CoefficientPrior::parse(cfg.coef_prior);
  const auto data = io::read_columns(cfg.data, 1)[0];
  PosteriorEstimate est;
  Json diag;
  if (cfg.transform == "logistic") {
    const Vector y = linspace(cfg.grid_min, cfg.grid_max, cfg.grid);
    est = fit_density_unbounded(data, model, y, method_of(cfg), Link::logistic());
    io::write_columns(cfg.out, {"x", "mean", "stderr"}, {est.grid, est.mean, est.std_error});
    diag = estimate_diagnostics(cfg, est);
    diag["transform"] = "logistic";
  } else if (cfg.transform == "none" || cfg.transform == "identity") {
    est = fit_density(data, model, linspace(0.0, 1.0, cfg.grid), method_of(cfg), true);
    io::write_columns(cfg.out, {"x", "mean", "stderr", "variance"}, {est.grid, est.mean, est.std_error, est.variance});
    diag = estimate_diagnostics(cfg, est);
  } else {
    throw ConfigError("--transform must be none, identity or logistic");
  }
  diag["sample_size"] = data.size();
  write_diagnostics(cfg, std::move(diag), 0.0);
}

void run_spectral(const RunConfig& cfg) {
  SpectralModel model;
  model.order = cfg.order;
  model.dimension_prior = DimensionPrior::parse(cfg.dim_prior);
  model.coefficient_prior = CoefficientPrior::parse(cfg.coef_prior);
  const auto series = io::read_columns(cfg.data, 1)[0];
  const Periodogram pgram = periodogram(series);
  const PosteriorEstimate est = fit_inverse_spectral(pgram, model, linspace(0.0, 1.0, cfg.grid), method_of(cfg));
  const Vector plugin = spectral_density_estimate(est.mean);
  io::write_columns(cfg.out, {"omega", "inverse_mean", "stderr", "plugin_spectral_density"},
                    {est.grid, est.mean, est.std_error, plugin});
  Json diag = estimate_diagnostics(cfg, est);
  diag["removed_mean"] = pgram.removed_mean;
  diag["ordinates"] = pgram.count();
  diag["frequency_convention"] = "omega in [0,1]; omega=1 is angular frequency pi";
  diag["plugin_spectral_density"] = "1/E[1/f], a plug-in, not a posterior mean of f";
  write_diagnostics(cfg, std::move(diag), 0.0);
}

template <typename Fit>
void run_count_regression(const RunConfig& cfg, Fit fit) {
  const auto cols = io::read_columns(cfg.data, 2);
  const auto counts = to_counts(cols[1], "response");
  const PosteriorEstimate est = fit(cols[0], counts, CoefficientPrior::parse(cfg.coef_prior));
  io::write_columns(cfg.out, {"z", "mean", "stderr"}, {est.grid, est.mean, est.std_error});
  write_diagnostics(cfg, estimate_diagnostics(cfg, est), 0.0);
}

GaussRegressionModel gauss_model(const RunConfig& cfg) {
  GaussRegressionModel model;
  model.order = cfg.order;
  model.dimension_prior = DimensionPrior::parse(cfg.dim_prior);
  model.prior_variance = cfg.tau2;
  model.noise_shape = cfg.noise_shape;
  model.noise_scale = cfg.noise_scale;
  model.sigma_min = cfg.sigma_min;
  return model;
}

void run_linreg(const RunConfig& cfg) {
  const auto cols = io::read_columns(cfg.data, 2);
  const PosteriorEstimate est = fit_gauss_regression(gauss_model(cfg), cols[0], cols[1], linspace(0.0, 1.0, cfg.grid));
  io::write_columns(cfg.out, {"z", "mean"}, {est.grid, est.mean});
  Json diag = estimate_diagnostics(cfg, est);
  diag["config"]["tau2"] = cfg.tau2;
  diag["config"]["noise_prior"] = {{"shape", cfg.noise_shape}, {"scale", cfg.noise_scale}, {"sigma_min", cfg.sigma_min}};
  write_diagnostics(cfg, std::move(diag), 0.0);
}

void run_funcreg(const RunConfig& cfg) {
  const io::WideTable table = io::read_wide(cfg.data);
  const auto responses = io::read_columns(cfg.responses, 1)[0];
  const Vector y = Eigen::Map<const Vector>(responses.data(), static_cast<Eigen::Index>(responses.size()));
  const PosteriorEstimate est = fit_functional(table.rows, table.header, y, gauss_model(cfg), linspace(0.0, 1.0, cfg.grid));
  io::write_columns(cfg.out, {"t", "beta_mean"}, {est.grid, est.mean});
  Json diag = estimate_diagnostics(cfg, est);
  diag["config"]["tau2"] = cfg.tau2;
  diag["coarse_time_grid"] = table.header.size() < 4 * DimensionPrior::parse(cfg.dim_prior).j_max();
  write_diagnostics(cfg, std::move(diag), 0.0);
}

void run_whitenoise(const RunConfig& cfg) {
  const auto obs = io::read_columns(cfg.data, 1)[0];
  SequenceModel model;
  model.observations = Eigen::Map<const Vector>(obs.data(), static_cast<Eigen::Index>(obs.size()));
  model.n = cfg.noise_n;
  model.prior_variance = cfg.tau2;
  model.dimension_prior = DimensionPrior::parse(cfg.dim_prior);
  const WhiteNoiseFit fit = fit_whitenoise(model);
  Vector index(fit.coefficients.size());
  for (Eigen::Index i = 0; i < index.size(); ++i) index[i] = static_cast<double>(i + 1);
  io::write_columns(cfg.out, {"i", "coefficient"}, {index, fit.coefficients});
  Json diag;
  diag["config"] = config_echo(cfg);
  diag["config"]["n"] = cfg.noise_n;
  diag["config"]["tau2"] = cfg.tau2;
  Json arr = Json::array();
  for (std::size_t i = 0; i < fit.dimensions.size(); ++i) {
    arr.push_back({{"j", fit.dimensions[i]}, {"probability", fit.dimension_posterior[i]}});
  }
  diag["dimension_posterior"] = arr;
  diag["shrinkage"] = fit.shrinkage;
  write_diagnostics(cfg, std::move(diag), 0.0);
}

Json simulation_json(const SimulationConfig& sc, const SimulationReport& report) {
  Json j;
  j["config"] = {{"seed", sc.seed},         {"replicates", sc.replicates}, {"n", sc.sample_size},
                 {"mc_samples", sc.samples}, {"grid", sc.grid_size},       {"q", sc.order},
                 {"dim_prior", sc.dimension_prior}, {"coef_prior", "dirichlet:1.0"}};
  j["mse"] = report.mse;
  j["max_stderr"] = report.max_std_error;
  j["median_mse"] = report.median_mse;
  j["worst_max_stderr"] = report.worst_std_error;
  return j;
}

void run_repro(const RunConfig& cfg, std::ostream& out) {
  SimulationConfig sc;
  sc.seed = cfg.seed;
  sc.replicates = cfg.replicates;
  sc.samples = cfg.mc_samples ? cfg.mc_samples : 1000;
  sc.grid_size = cfg.grid;
  sc.order = cfg.order;
  sc.dimension_prior = cfg.dim_prior;
  if (sc.replicates < 1) throw ConfigError("--replicates must be >= 1");
  const SimulationReport report = simulation_study(sc);
  Json j = simulation_json(sc, report);
  if (!cfg.out.empty()) {
    const auto& est = report.first_estimate;
    io::write_columns(cfg.out, {"x", "truth", "mean", "stderr"}, {est.grid, report.truth, est.mean, est.std_error});
    j["wall_time_s"] = report.wall_time_s;
    io::write_text(diagnostics_path(cfg), j.dump(2) + "\n");
  }
  out << "replicate,mse,max_stderr\n";
  for (std::size_t r = 0; r < report.mse.size(); ++r) {
    out << r << ',' << io::format_double(report.mse[r]) << ',' << io::format_double(report.max_std_error[r]) << '\n';
  }
  out << "median_mse=" << io::format_double(report.median_mse)
      << " worst_max_stderr=" << io::format_double(report.worst_std_error) << '\n';
}

void add_common(CLI::App* sub, RunConfig& cfg, bool mc) {
  sub->add_option("--data", cfg.data, "input CSV (header row required)")->required();
  sub->add_option("--out", cfg.out, "output grid CSV")->required();
  sub->add_option("--diag", cfg.diagnostics, "diagnostics JSON path (default <out>.json)");
  sub->add_option("--q", cfg.order, "B-spline order");
  sub->add_option("--dim-prior", cfg.dim_prior, "dimension prior, e.g. geom:0.15:5:12");
  sub->add_option("--grid", cfg.grid, "number of evaluation grid points");
  if (mc) {
    sub->add_option("--coef-prior", cfg.coef_prior, "coefficient prior, e.g. dirichlet:1.0");
    sub->add_option("--mc", cfg.mc_samples, "Monte Carlo sample count N (omit for exact enumeration)");
    sub->add_option("--seed", cfg.seed, "Monte Carlo seed");
    sub->add_flag("--uniform-sampling", cfg.uniform_sampling, "sample index configurations uniformly");
    sub->add_option("--budget", cfg.budget, "exact enumeration budget (configurations per dimension)");
  }
  sub->add_flag("-v,--verbose", cfg.verbosity);
}

void add_gauss(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--tau2", cfg.tau2, "coefficient prior variance multiplier");
  sub->add_option("--noise-shape", cfg.noise_shape, "inverse-gamma shape for sigma^2");
  sub->add_option("--noise-scale", cfg.noise_scale, "inverse-gamma scale for sigma^2");
  sub->add_option("--sigma-min", cfg.sigma_min, "lower bound on sigma (0 = none)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"randseries: MCMC-free posterior means under B-spline random series priors"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* density = app.add_subcommand("density", "density estimation on [0,1] (or R via --transform logistic)");
  add_common(density, cfg, true);
  density->add_option("--transform", cfg.transform, "none | identity | logistic");
  density->add_option("--grid-min", cfg.grid_min, "grid lower end for --transform logistic");
  density->add_option("--grid-max", cfg.grid_max, "grid upper end for --transform logistic");

  auto* spectral = app.add_subcommand("spectral", "Whittle spectral density estimation");
  add_common(spectral, cfg, true);
  auto* binary = app.add_subcommand("binary", "binary regression (identity link, beta priors)");
  add_common(binary, cfg, true);
  auto* poisson = app.add_subcommand("poisson", "Poisson regression (identity link, gamma priors)");
  add_common(poisson, cfg, true);
  auto* linreg = app.add_subcommand("linreg", "Gaussian nonparametric regression");
  add_common(linreg, cfg, false);
  add_gauss(linreg, cfg);
  auto* funcreg = app.add_subcommand("funcreg", "functional linear regression");
  add_common(funcreg, cfg, false);
  add_gauss(funcreg, cfg);
  funcreg->add_option("--responses", cfg.responses, "single-column CSV of scalar responses")->required();
  auto* whitenoise = app.add_subcommand("whitenoise", "Gaussian sequence model");
  add_common(whitenoise, cfg, false);
  whitenoise->add_option("--n", cfg.noise_n, "noise precision n (noise sd 1/sqrt(n))");
  whitenoise->add_option("--tau2", cfg.tau2, "coefficient prior variance");

  auto* repro = app.add_subcommand("repro-section9", "density simulation study with the mixture truth");
  repro->add_option("--seed", cfg.seed, "master seed");
  repro->add_option("--replicates", cfg.replicates, "number of simulated data sets");
  repro->add_option("--mc", cfg.mc_samples, "Monte Carlo sample count N (default 1000)");
  repro->add_option("--grid", cfg.grid, "grid points in [0,1]");
  repro->add_option("--q", cfg.order, "B-spline order");
  repro->add_option("--dim-prior", cfg.dim_prior, "dimension prior");
  repro->add_option("--out", cfg.out, "grid CSV of truth vs first-replicate estimate");
  repro->add_option("--diag", cfg.diagnostics, "report JSON path (default <out>.json)");

  auto* verify = app.add_subcommand("verify", "run the oracle cross-checks");

  std::vector<std::string> argv_storage{"randseries"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    const auto started = std::chrono::steady_clock::now();
    auto* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    if (cfg.coef_prior.empty()) {
      if (sub == density) cfg.coef_prior = "dirichlet:1.0";
      if (sub == spectral || sub == poisson) cfg.coef_prior = "gamma:1.0:1.0";
      if (sub == binary) cfg.coef_prior = "beta:1.0:1.0";
    }
    validate(cfg);
    if (sub == verify) return run_verification(out) ? kOk : kNumericalError;
    if (sub == repro) {
      run_repro(cfg, out);
      return kOk;
    }
    if (sub == density) {
      run_density(cfg);
    } else if (sub == spectral) {
      run_spectral(cfg);
    } else if (sub == binary) {
      run_count_regression(cfg, [&](const auto& z, const auto& x, const CoefficientPrior& prior) {
        BinaryModel model{cfg.order, DimensionPrior::parse(cfg.dim_prior), prior};
        return fit_binary(z, x, model, linspace(0.0, 1.0, cfg.grid), method_of(cfg));
      });
    } else if (sub == poisson) {
      run_count_regression(cfg, [&](const auto& z, const auto& x, const CoefficientPrior& prior) {
        PoissonModel model{cfg.order, DimensionPrior::parse(cfg.dim_prior), prior};
        return fit_poisson(z, x, model, linspace(0.0, 1.0, cfg.grid), method_of(cfg));
      });
    } else if (sub == linreg) {
      run_linreg(cfg);
    } else if (sub == funcreg) {
      run_funcreg(cfg);
    } else if (sub == whitenoise) {
      run_whitenoise(cfg);
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    // rewrite diagnostics with the measured wall time
    auto diag = Json::parse(std::ifstream(diagnostics_path(cfg)));
    diag["wall_time_s"] = wall;
    io::write_text(diagnostics_path(cfg), diag.dump(2) + "\n");
    if (cfg.verbosity > 0) out << "wrote " << cfg.out << " and " << diagnostics_path(cfg) << '\n';
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  }
}

SimulationReport simulation_study(const SimulationConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  DensityModel model;
  model.order = config.order;
  model.dimension_prior = DimensionPrior::parse(config.dimension_prior);
  model.coefficient_prior = CoefficientPrior::dirichlet({1.0});
  const MixtureTruth truth;
  const Vector grid = linspace(0.0, 1.0, config.grid_size);

  SimulationReport report;
  report.truth.resize(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) report.truth[i] = truth.density(grid[i]);
  for (int r = 0; r < config.replicates; ++r) {
    Rng data_rng = make_rng(config.seed, 1000 + static_cast<std::uint64_t>(r));
    const auto data = truth.sample(config.sample_size, data_rng);
    const Method method = Method::monte_carlo(config.samples, config.seed * 7919 + static_cast<std::uint64_t>(r));
    PosteriorEstimate est = fit_density(data, model, grid, method);
    report.mse.push_back((est.mean - report.truth).squaredNorm() / static_cast<double>(grid.size()));
    report.max_std_error.push_back(est.max_std_error());
    if (r == 0) report.first_estimate = std::move(est);
  }
  std::vector<double> sorted = report.mse;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  report.median_mse = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  report.worst_std_error = *std::max_element(report.max_std_error.begin(), report.max_std_error.end());
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace randseries::cli
