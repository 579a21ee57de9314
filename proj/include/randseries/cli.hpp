#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "randseries/estimate.hpp"

namespace randseries::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 2;
inline constexpr int kNumericalError = 3;

/// Runs one CLI invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Density simulation study: n draws from the exponential/normal mixture on
/// [0,1], quadratic splines, truncated geometric prior on J, flat Dirichlet
/// coefficients, Monte Carlo evaluation on an evenly spaced grid.
struct SimulationConfig {
  std::uint64_t seed = 1;
  int replicates = 10;
  int sample_size = 50;
  int samples = 1000;
  int grid_size = 1000;
  int order = 3;
  std::string dimension_prior = "geom:0.15:5:12";
};

struct SimulationReport {
  std::vector<double> mse;
  std::vector<double> max_std_error;
  double median_mse = 0.0;
  double worst_std_error = 0.0;
  double wall_time_s = 0.0;
  /// First replicate's curve, for plotting against the truth.
  PosteriorEstimate first_estimate;
  Vector truth;
};

SimulationReport simulation_study(const SimulationConfig& config);

/// Runs the oracle cross-checks, one PASS/FAIL line each. True iff all pass.
bool run_verification(std::ostream& out);

}  // namespace randseries::cli
