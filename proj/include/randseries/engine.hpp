#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "randseries/common.hpp"
#include "randseries/priors.hpp"
#include "randseries/spline_basis.hpp"

namespace randseries {

/// Closed-form log integrated weight L_j of one basis dimension, written as a
/// sum of per-index terms phi(k, count_k, tally_k) and a term psi(total count).
///
/// count_k is the number of slot units assigned to basis index k; tally_k is a
/// model-specific per-index sum (successes for binary regression).
class LogMarginal {
 public:
  virtual ~LogMarginal() = default;
  virtual double index_term(int k, int count, int tally) const = 0;
  virtual double total_term(int /*total*/) const { return 0.0; }
  virtual bool uses_tally() const { return false; }
};

/// One candidate assignment of a slot: its weight and the count increments it
/// makes, as (basis index, units) pairs.
struct Candidate {
  double weight = 0.0;
  std::vector<std::pair<int, int>> increments;
};

/// Per-observation index range. Index slots pick one of the q supported basis
/// functions with weight B_i(location); composition slots spread a count X over
/// them with weight prod B_i^{s_i} / s_i!.
struct Slot {
  enum class Kind { index, composition };

  Kind kind = Kind::index;
  int first = 0;
  std::vector<double> base;  ///< supported basis values at the slot location
  int count = 1;             ///< units placed by the slot (X for compositions)
  int tally = 0;             ///< tally increment for index slots

  static Slot index(const SparseBasisValues& values, int tally = 0);
  static Slot composition(const SparseBasisValues& values, int count);

  std::vector<Candidate> candidates() const;
  double candidate_count() const;
  double weight_sum() const;
  double log_weight_sum() const;

  auto operator<=>(const Slot&) const = default;
};

Slot build_slot(const SplineBasis& basis, double location, int tally = 0);
Slot build_slot(const ScaledBasis& basis, double location, int tally = 0);
Slot build_composition_slot(const SplineBasis& basis, double location, int count);

/// Everything the engine needs for one basis dimension j.
struct DimensionTerm {
  int dimension = 0;
  std::vector<Slot> slots;
  /// Weights of the evaluation slot at a query point.
  std::function<SparseBasisValues(double)> evaluation;
  std::shared_ptr<const LogMarginal> marginal;
  double log_constant = 0.0;
  int evaluation_tally = 1;
};

/// Ratio-of-sums posterior functional mixed over the dimension prior:
///   sum_j pi(j) sum_config w(config) sum_i0 w0_i0(x) exp L_j(stats + i0)
///   --------------------------------------------------------------------
///   sum_j pi(j) sum_config w(config) exp L_j(stats)
/// terms[j - j_min] describes dimension j.
struct RatioSumSpec {
  DimensionPrior prior = DimensionPrior::fixed(1);
  std::vector<DimensionTerm> terms;

  const DimensionTerm& term(int j) const { return terms.at(static_cast<std::size_t>(j - prior.j_min())); }
};

enum class Sampling { weighted, uniform };

struct Method {
  enum class Kind { exact, monte_carlo };

  Kind kind = Kind::exact;
  int samples = 0;
  std::uint64_t seed = 0;
  Sampling sampling = Sampling::weighted;
  bool rao_blackwell = true;
  double budget = 1e8;

  static Method exact(double budget = 1e8) { return Method{Kind::exact, 0, 0, Sampling::weighted, true, budget}; }
  static Method monte_carlo(int samples, std::uint64_t seed) {
    return Method{Kind::monte_carlo, samples, seed, Sampling::weighted, true, 1e8};
  }
  bool is_exact() const { return kind == Kind::exact; }
};

struct RatioResult {
  double value = 0.0;
  double std_error = 0.0;
  /// log of pi(j) times the numerator sum for each j, j_min first.
  std::vector<double> log_contributions;
  int samples = 0;
  std::uint64_t seed = 0;
};

/// Numerator/denominator tables prepared once per data set; evaluating at a
/// point only combines them with the evaluation-slot weights, so the
/// denominator is shared by every grid point.
class RatioEvaluator {
 public:
  RatioEvaluator(const RatioSumSpec& spec, const Method& method, bool second_moment = false);

  RatioResult evaluate(double x) const;
  std::vector<RatioResult> evaluate_grid(const Vector& grid) const;

  /// Posterior mean of the squared functional (two evaluation slots at x).
  double second_moment(double x) const;

  /// log sum over configurations of the denominator, all dimensions.
  double log_denominator() const { return log_denominator_; }
  /// pi(j) * denominator_j normalized over j.
  std::vector<double> dimension_posterior() const;

  const Method& method() const { return method_; }
  const RatioSumSpec& spec() const { return *spec_; }

 private:
  struct Table;

  std::shared_ptr<const RatioSumSpec> spec_;
  Method method_;
  bool second_moment_;
  std::vector<std::shared_ptr<Table>> tables_;
  double log_denominator_ = kNegInf;
  double log_scale_max_ = 0.0;

  void prepare_exact(std::size_t idx);
  void prepare_mc(std::size_t idx);
};

RatioResult exact_ratio(const RatioSumSpec& spec, double x, double budget = 1e8);
RatioResult mc_ratio(const RatioSumSpec& spec, double x, int samples, std::uint64_t seed);
std::vector<double> dimension_posterior(const RatioSumSpec& spec, const Method& method);

/// Sorts observation slots into a canonical order so results do not depend
/// on the order of the input data.
void canonicalize(RatioSumSpec& spec);

}  // namespace randseries
