#pragma once

#include <vector>

#include "randseries/common.hpp"
#include "randseries/engine.hpp"

namespace randseries {

/// Pointwise posterior summary over an evaluation grid.
struct PosteriorEstimate {
  Vector grid;
  Vector mean;
  Vector std_error;  ///< Monte Carlo standard error; zero in exact mode
  Vector variance;   ///< posterior variance when requested, otherwise empty
  std::vector<int> dimensions;
  std::vector<double> dimension_posterior;
  Method method;

  double max_std_error() const { return std_error.size() ? std_error.maxCoeff() : 0.0; }
};

/// Evaluates a prepared ratio over a grid into an estimate.
PosteriorEstimate summarize(const RatioEvaluator& evaluator, const Vector& grid);

}  // namespace randseries
