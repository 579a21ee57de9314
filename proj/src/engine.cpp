#include "randseries/engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "randseries/compositions.hpp"

namespace randseries {

// ---------------------------------------------------------------------------
// Slots

Slot Slot::index(const SparseBasisValues& values, int tally) {
  Slot s;
  s.kind = Kind::index;
  s.first = values.first;
  s.base = values.values;
  s.count = 1;
  s.tally = tally;
  return s;
}

Slot Slot::composition(const SparseBasisValues& values, int count) {
  if (count < 0) throw ConfigError("composition slot count must be nonnegative");
  Slot s;
  s.kind = Kind::composition;
  s.first = values.first;
  s.base = values.values;
  s.count = count;
  s.tally = 0;
  return s;
}

std::vector<Candidate> Slot::candidates() const {
  std::vector<Candidate> out;
  const int q = static_cast<int>(base.size());
  if (kind == Kind::index) {
    for (int i = 0; i < q; ++i) out.push_back({base[static_cast<std::size_t>(i)], {{first + i, 1}}});
    return out;
  }
  for (const auto& comp : enumerate_compositions(count, q)) {
    Candidate c;
    double logw = 0.0;
    for (int i = 0; i < q; ++i) {
      const int s = comp[static_cast<std::size_t>(i)];
      if (s == 0) continue;
      logw += s * std::log(base[static_cast<std::size_t>(i)]) - log_gamma(s + 1.0);
      c.increments.emplace_back(first + i, s);
    }
    c.weight = std::exp(logw);
    out.push_back(std::move(c));
  }
  return out;
}

double Slot::candidate_count() const {
  const int q = static_cast<int>(base.size());
  return kind == Kind::index ? q : composition_count(count, q);
}

double Slot::weight_sum() const { return std::exp(log_weight_sum()); }

double Slot::log_weight_sum() const {
  double s = 0.0;
  for (double b : base) s += b;
  if (kind == Kind::index) return std::log(s);
  return count * std::log(s) - log_gamma(count + 1.0);
}

Slot build_slot(const SplineBasis& basis, double location, int tally) {
  return Slot::index(basis.evaluate(location), tally);
}

Slot build_slot(const ScaledBasis& basis, double location, int tally) {
  return Slot::index(basis.evaluate(location), tally);
}

Slot build_composition_slot(const SplineBasis& basis, double location, int count) {
  return Slot::composition(basis.evaluate(location), count);
}

void canonicalize(RatioSumSpec& spec) {
  for (auto& term : spec.terms) std::sort(term.slots.begin(), term.slots.end());
}

// ---------------------------------------------------------------------------
// Cached marginal terms

namespace {

class MarginalCache {
 public:
  MarginalCache(const LogMarginal& marginal, int dimension, int max_count)
      : marginal_(marginal), dim_(dimension), width_(max_count + 1), tally_(marginal.uses_tally()) {
    const double entries = static_cast<double>(dim_) * width_ * (tally_ ? width_ : 1);
    if (entries <= 2e7) {
      cached_ = true;
      phi_.resize(static_cast<std::size_t>(entries));
      for (int k = 0; k < dim_; ++k) {
        for (int c = 0; c < width_; ++c) {
          if (tally_) {
            for (int t = 0; t <= c; ++t) phi_[slot(k, c, t)] = marginal_.index_term(k, c, t);
          } else {
            phi_[slot(k, c, 0)] = marginal_.index_term(k, c, 0);
          }
        }
      }
    }
    psi_.resize(static_cast<std::size_t>(width_));
    for (int c = 0; c < width_; ++c) psi_[static_cast<std::size_t>(c)] = marginal_.total_term(c);
  }

  double phi(int k, int c, int t) const {
    if (cached_ && c < width_) return phi_[slot(k, c, tally_ ? t : 0)];
    return marginal_.index_term(k, c, t);
  }
  double psi(int total) const {
    return total < width_ ? psi_[static_cast<std::size_t>(total)] : marginal_.total_term(total);
  }

 private:
  std::size_t slot(int k, int c, int t) const {
    return tally_ ? (static_cast<std::size_t>(k) * width_ + c) * width_ + t
                  : static_cast<std::size_t>(k) * width_ + c;
  }

  const LogMarginal& marginal_;
  int dim_;
  int width_;
  bool tally_;
  bool cached_ = false;
  std::vector<double> phi_;
  std::vector<double> psi_;
};

int max_units(const DimensionTerm& term) {
  int units = 2 * term.evaluation_tally + 2;
  for (const auto& s : term.slots) units += s.count;
  return units;
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int sample_categorical(const std::vector<double>& weights, double total, Rng& rng) {
  const double u = uniform01(rng) * total;
  double cum = 0.0;
  int last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    cum += weights[i];
    last_positive = static_cast<int>(i);
    if (u < cum) return last_positive;
  }
  return last_positive;
}

int uniform_int(int n, Rng& rng) {
  return std::min(n - 1, static_cast<int>(uniform01(rng) * n));
}

}  // namespace

// ---------------------------------------------------------------------------
// Evaluator

struct RatioEvaluator::Table {
  int dim = 0;
  int order = 0;
  double log_weight = 0.0;  // log pi(j) + constants
  // exact mode
  double log_den = kNegInf;
  std::vector<double> log_pred;
  std::vector<double> log_pair;  // dim x dim
  // monte carlo mode: values scaled by exp(-shift)
  double shift = kNegInf;
  double mean_den = 0.0;
  std::vector<double> den;
  std::vector<double> pred;  // samples x dim
  std::vector<double> pair;  // samples x dim x order (band l = k .. k + order - 1)

  double log_contribution() const {
    if (!log_pred.empty() || den.empty()) return log_weight + log_den;
    return mean_den > 0.0 ? log_weight + shift + std::log(mean_den) : kNegInf;
  }
};

RatioEvaluator::RatioEvaluator(const RatioSumSpec& spec, const Method& method, bool second_moment)
    : spec_(std::make_shared<RatioSumSpec>(spec)), method_(method), second_moment_(second_moment) {
  if (static_cast<int>(spec.terms.size()) != spec.prior.size()) {
    throw ConfigError("ratio spec needs one dimension term per prior support point");
  }
  if (!method.is_exact() && method.samples < 2) {
    throw ConfigError("Monte Carlo sample count N must be >= 2, got " + std::to_string(method.samples));
  }
  tables_.resize(spec.terms.size());
  parallel_for(tables_.size(), [&](std::size_t idx) {
    if (method_.is_exact()) {
      prepare_exact(idx);
    } else {
      prepare_mc(idx);
    }
  });
  LogSumExp den;
  double max_scale = kNegInf;
  for (const auto& t : tables_) {
    den.add(t->log_contribution());
    if (!t->den.empty()) max_scale = std::max(max_scale, t->log_weight + t->shift);
  }
  log_denominator_ = den.value();
  log_scale_max_ = max_scale;
  if (!std::isfinite(log_denominator_)) {
    throw NumericalError("degenerate denominator: every configuration has zero weight");
  }
}

void RatioEvaluator::prepare_exact(std::size_t idx) {
  const DimensionTerm& term = spec_->terms[idx];
  const int j = term.dimension;
  auto table = std::make_shared<Table>();
  table->dim = j;
  table->log_weight = spec_->prior.log_pmf(spec_->prior.j_min() + static_cast<int>(idx)) + term.log_constant;
  table->order = term.slots.empty() ? 0 : static_cast<int>(term.slots.front().base.size());

  double log_configs = 0.0;
  for (const auto& s : term.slots) log_configs += std::log(s.candidate_count());
  if (log_configs > std::log(method_.budget)) {
    throw BudgetExceeded("exact enumeration for J=" + std::to_string(j) + " needs about exp(" +
                         std::to_string(log_configs) + ") configurations, above the budget of " +
                         std::to_string(method_.budget) + "; use Monte Carlo");
  }

  struct Choice {
    double log_weight;
    std::vector<std::pair<int, int>> increments;
    int tally;
  };
  std::vector<std::vector<Choice>> choices;
  for (const auto& s : term.slots) {
    std::vector<Choice> list;
    for (auto& c : s.candidates()) {
      if (c.weight > 0.0) list.push_back({std::log(c.weight), std::move(c.increments), s.tally});
    }
    if (list.empty()) throw NumericalError("slot with all-zero weights");
    choices.push_back(std::move(list));
  }

  const MarginalCache cache(*term.marginal, j, max_units(term));
  const int tau = term.evaluation_tally;
  std::vector<int> count(static_cast<std::size_t>(j), 0);
  std::vector<int> tally(static_cast<std::size_t>(j), 0);
  int total = 0;
  LogSumExp den;
  std::vector<LogSumExp> pred(static_cast<std::size_t>(j));
  std::vector<LogSumExp> pair(second_moment_ ? static_cast<std::size_t>(j * j) : 0);

  auto base_L = [&] {
    double L = cache.psi(0);
    for (int k = 0; k < j; ++k) L += cache.phi(k, 0, 0);
    return L;
  }();

  auto leaf = [&](double log_w, double L) {
    const double log_leaf = log_w + L;
    den.add(log_leaf);
    const double d_total = cache.psi(total + 1) - cache.psi(total);
    for (int k = 0; k < j; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      pred[ku].add(log_leaf + cache.phi(k, count[ku] + 1, tally[ku] + tau) - cache.phi(k, count[ku], tally[ku]) +
                   d_total);
    }
    if (!second_moment_) return;
    const double d_total2 = cache.psi(total + 2) - cache.psi(total);
    for (int k = 0; k < j; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      const double own = cache.phi(k, count[ku], tally[ku]);
      for (int l = k; l < j; ++l) {
        const auto lu = static_cast<std::size_t>(l);
        double delta;
        if (l == k) {
          delta = cache.phi(k, count[ku] + 2, tally[ku] + 2 * tau) - own;
        } else {
          delta = cache.phi(k, count[ku] + 1, tally[ku] + tau) - own + cache.phi(l, count[lu] + 1, tally[lu] + tau) -
                  cache.phi(l, count[lu], tally[lu]);
        }
        pair[ku * static_cast<std::size_t>(j) + lu].add(log_leaf + delta + d_total2);
      }
    }
  };

  // depth-first over slots; L is carried down the stack rather than reverted
  std::function<void(std::size_t, double, double)> visit = [&](std::size_t s, double log_w, double L) {
    if (s == choices.size()) {
      leaf(log_w, L);
      return;
    }
    for (const auto& c : choices[s]) {
      double next = L;
      int units = 0;
      for (const auto& [k, u] : c.increments) {
        const auto ku = static_cast<std::size_t>(k);
        const int dt = c.tally * u;
        next += cache.phi(k, count[ku] + u, tally[ku] + dt) - cache.phi(k, count[ku], tally[ku]);
        count[ku] += u;
        tally[ku] += dt;
        units += u;
      }
      next += cache.psi(total + units) - cache.psi(total);
      total += units;
      visit(s + 1, log_w + c.log_weight, next);
      total -= units;
      for (const auto& [k, u] : c.increments) {
        count[static_cast<std::size_t>(k)] -= u;
        tally[static_cast<std::size_t>(k)] -= c.tally * u;
      }
    }
  };
  visit(0, 0.0, base_L);

  table->log_den = den.value();
  table->log_pred.resize(static_cast<std::size_t>(j));
  for (int k = 0; k < j; ++k) table->log_pred[static_cast<std::size_t>(k)] = pred[static_cast<std::size_t>(k)].value();
  if (second_moment_) {
    table->log_pair.assign(static_cast<std::size_t>(j * j), kNegInf);
    for (int k = 0; k < j; ++k) {
      for (int l = k; l < j; ++l) {
        const double v = pair[static_cast<std::size_t>(k * j + l)].value();
        table->log_pair[static_cast<std::size_t>(k * j + l)] = v;
        table->log_pair[static_cast<std::size_t>(l * j + k)] = v;
      }
    }
  }
  tables_[idx] = std::move(table);
}

void RatioEvaluator::prepare_mc(std::size_t idx) {
  const DimensionTerm& term = spec_->terms[idx];
  const int j = term.dimension;
  const int n_samples = method_.samples;
  const bool weighted = method_.sampling == Sampling::weighted;
  auto table = std::make_shared<Table>();
  table->dim = j;
  table->log_weight = spec_->prior.log_pmf(spec_->prior.j_min() + static_cast<int>(idx)) + term.log_constant;
  table->order = static_cast<int>(term.evaluation(0.5).values.size());
  const int q = table->order;

  if (weighted) {
    // sampling proportional to candidate weights folds each slot's weight sum
    // into a constant, leaving exp(L) as the per-draw integrand
    for (const auto& s : term.slots) {
      const double lw = s.log_weight_sum();
      if (!std::isfinite(lw)) throw NumericalError("slot with all-zero weights");
      table->log_weight += lw;
    }
  }

  const MarginalCache cache(*term.marginal, j, max_units(term));
  const int tau = term.evaluation_tally;
  Rng rng = make_rng(method_.seed, static_cast<std::uint64_t>(j));

  std::vector<double> log_den(static_cast<std::size_t>(n_samples));
  std::vector<double> log_pred(static_cast<std::size_t>(n_samples) * j);
  std::vector<double> log_pair(second_moment_ ? static_cast<std::size_t>(n_samples) * j * q : 0, kNegInf);
  std::vector<int> count(static_cast<std::size_t>(j));
  std::vector<int> tally(static_cast<std::size_t>(j));
  std::vector<int> parts;
  std::vector<int> bars;

  for (int d = 0; d < n_samples; ++d) {
    std::fill(count.begin(), count.end(), 0);
    std::fill(tally.begin(), tally.end(), 0);
    double log_importance = 0.0;
    for (const auto& s : term.slots) {
      const int width = static_cast<int>(s.base.size());
      if (s.kind == Slot::Kind::index) {
        int pick;
        if (weighted) {
          double sum = 0.0;
          for (double b : s.base) sum += b;
          pick = sample_categorical(s.base, sum, rng);
        } else {
          pick = uniform_int(width, rng);
          log_importance += std::log(s.base[static_cast<std::size_t>(pick)] * width);
        }
        count[static_cast<std::size_t>(s.first + pick)] += 1;
        tally[static_cast<std::size_t>(s.first + pick)] += s.tally;
        continue;
      }
      parts.assign(static_cast<std::size_t>(width), 0);
      if (weighted) {
        double sum = 0.0;
        for (double b : s.base) sum += b;
        for (int u = 0; u < s.count; ++u) ++parts[static_cast<std::size_t>(sample_categorical(s.base, sum, rng))];
      } else {
        // uniform weak composition: q - 1 bars among count + q - 1 positions
        const int slots_total = s.count + width - 1;
        bars.clear();
        for (int r = slots_total - (width - 1); r < slots_total; ++r) {
          const int t = uniform_int(r + 1, rng);
          if (std::find(bars.begin(), bars.end(), t) == bars.end()) {
            bars.push_back(t);
          } else {
            bars.push_back(r);
          }
        }
        std::sort(bars.begin(), bars.end());
        int prev = -1;
        for (int b = 0; b < width - 1; ++b) {
          parts[static_cast<std::size_t>(b)] = bars[static_cast<std::size_t>(b)] - prev - 1;
          prev = bars[static_cast<std::size_t>(b)];
        }
        parts[static_cast<std::size_t>(width - 1)] = slots_total - prev - 1;
        double logw = std::log(composition_count(s.count, width));
        for (int i = 0; i < width; ++i) {
          const int si = parts[static_cast<std::size_t>(i)];
          if (si > 0) logw += si * std::log(s.base[static_cast<std::size_t>(i)]) - log_gamma(si + 1.0);
        }
        log_importance += logw;
      }
      for (int i = 0; i < width; ++i) count[static_cast<std::size_t>(s.first + i)] += parts[static_cast<std::size_t>(i)];
    }

    int total = 0;
    double L = 0.0;
    for (int k = 0; k < j; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      L += cache.phi(k, count[ku], tally[ku]);
      total += count[ku];
    }
    L += cache.psi(total);
    const double base = L + log_importance;
    log_den[static_cast<std::size_t>(d)] = base;
    const double d_total = cache.psi(total + 1) - cache.psi(total);
    double* row = &log_pred[static_cast<std::size_t>(d) * j];
    for (int k = 0; k < j; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      row[k] = base + cache.phi(k, count[ku] + 1, tally[ku] + tau) - cache.phi(k, count[ku], tally[ku]) + d_total;
    }
    if (second_moment_) {
      const double d_total2 = cache.psi(total + 2) - cache.psi(total);
      double* prow = &log_pair[static_cast<std::size_t>(d) * j * q];
      for (int k = 0; k < j; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const double own = cache.phi(k, count[ku], tally[ku]);
        for (int off = 0; off < q && k + off < j; ++off) {
          const int l = k + off;
          const auto lu = static_cast<std::size_t>(l);
          double delta;
          if (off == 0) {
            delta = cache.phi(k, count[ku] + 2, tally[ku] + 2 * tau) - own;
          } else {
            delta = cache.phi(k, count[ku] + 1, tally[ku] + tau) - own +
                    cache.phi(l, count[lu] + 1, tally[lu] + tau) - cache.phi(l, count[lu], tally[lu]);
          }
          prow[k * q + off] = base + delta + d_total2;
        }
      }
    }
  }

  double shift = kNegInf;
  for (double v : log_den) shift = std::max(shift, v);
  for (double v : log_pred) shift = std::max(shift, v);
  table->shift = shift;
  table->den.resize(log_den.size());
  table->pred.resize(log_pred.size());
  if (std::isfinite(shift)) {
    double sum = 0.0;
    for (std::size_t i = 0; i < log_den.size(); ++i) {
      table->den[i] = std::exp(log_den[i] - shift);
      sum += table->den[i];
    }
    table->mean_den = sum / n_samples;
    for (std::size_t i = 0; i < log_pred.size(); ++i) table->pred[i] = std::exp(log_pred[i] - shift);
    if (second_moment_) {
      table->pair.resize(log_pair.size());
      for (std::size_t i = 0; i < log_pair.size(); ++i) table->pair[i] = std::exp(log_pair[i] - shift);
    }
  }
  tables_[idx] = std::move(table);
}

RatioResult RatioEvaluator::evaluate(double x) const {
  RatioResult result;
  result.samples = method_.is_exact() ? 0 : method_.samples;
  result.seed = method_.seed;
  result.log_contributions.resize(tables_.size(), kNegInf);

  if (method_.is_exact()) {
    LogSumExp numer;
    for (std::size_t idx = 0; idx < tables_.size(); ++idx) {
      const Table& t = *tables_[idx];
      const auto w0 = spec_->terms[idx].evaluation(x);
      LogSumExp inner;
      for (std::size_t i = 0; i < w0.values.size(); ++i) {
        if (w0.values[i] > 0.0) inner.add(std::log(w0.values[i]) + t.log_pred[static_cast<std::size_t>(w0.first) + i]);
      }
      result.log_contributions[idx] = t.log_weight + inner.value();
      numer.add(result.log_contributions[idx]);
    }
    result.value = std::exp(numer.value() - log_denominator_);
    return result;
  }

  const double n = method_.samples;
  std::vector<SparseBasisValues> w0(tables_.size());
  std::vector<double> alpha(tables_.size(), 0.0);
  std::vector<std::vector<double>> numer_draws(tables_.size());
  double numer = 0.0;
  double denom = 0.0;
  for (std::size_t idx = 0; idx < tables_.size(); ++idx) {
    const Table& t = *tables_[idx];
    w0[idx] = spec_->terms[idx].evaluation(x);
    if (t.den.empty() || !std::isfinite(t.shift)) continue;
    alpha[idx] = std::exp(t.log_weight + t.shift - log_scale_max_);
    auto& draws = numer_draws[idx];
    draws.resize(t.den.size());
    const auto first = static_cast<std::size_t>(w0[idx].first);
    const auto& vals = w0[idx].values;
    if (method_.rao_blackwell) {
      for (std::size_t d = 0; d < t.den.size(); ++d) {
        const double* row = &t.pred[d * static_cast<std::size_t>(t.dim)];
        double s = 0.0;
        for (std::size_t i = 0; i < vals.size(); ++i) s += vals[i] * row[first + i];
        draws[d] = s;
      }
    } else {
      Rng rng = make_rng(method_.seed ^ std::bit_cast<std::uint64_t>(x), 0x5eed0000ULL + static_cast<std::uint64_t>(t.dim));
      double w_sum = 0.0;
      for (double v : vals) w_sum += v;
      for (std::size_t d = 0; d < t.den.size(); ++d) {
        const auto pick = static_cast<std::size_t>(sample_categorical(vals, w_sum, rng));
        draws[d] = w_sum * t.pred[d * static_cast<std::size_t>(t.dim) + first + pick];
      }
    }
    double s = 0.0;
    for (double v : draws) s += v;
    const double mean_numer = s / n;
    result.log_contributions[idx] = mean_numer > 0.0 ? log_scale_max_ + std::log(alpha[idx] * mean_numer) : kNegInf;
    numer += alpha[idx] * mean_numer;
    denom += alpha[idx] * t.mean_den;
  }
  if (!(denom > 0.0) || !std::isfinite(denom)) throw NumericalError("degenerate Monte Carlo denominator estimate");
  const double ratio = numer / denom;

  // delta method: Var(N/D) ~ sum_j alpha_j^2 Var(n_d - R d_d) / (N D^2)
  double var = 0.0;
  for (std::size_t idx = 0; idx < tables_.size(); ++idx) {
    if (numer_draws[idx].empty()) continue;
    const Table& t = *tables_[idx];
    const auto& draws = numer_draws[idx];
    const double ref = draws[0] - ratio * t.den[0];
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t d = 0; d < draws.size(); ++d) {
      const double y = (draws[d] - ratio * t.den[d]) - ref;
      sum += y;
      sum_sq += y * y;
    }
    const double sample_var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
    var += alpha[idx] * alpha[idx] * sample_var / n;
  }
  result.value = ratio;
  result.std_error = std::sqrt(var) / denom;
  return result;
}

std::vector<RatioResult> RatioEvaluator::evaluate_grid(const Vector& grid) const {
  std::vector<RatioResult> out(static_cast<std::size_t>(grid.size()));
  parallel_for(out.size(), [&](std::size_t i) { out[i] = evaluate(grid[static_cast<Eigen::Index>(i)]); });
  return out;
}

double RatioEvaluator::second_moment(double x) const {
  if (!second_moment_) throw ConfigError("evaluator was prepared without second-moment tables");
  if (method_.is_exact()) {
    LogSumExp numer;
    for (std::size_t idx = 0; idx < tables_.size(); ++idx) {
      const Table& t = *tables_[idx];
      const auto w0 = spec_->terms[idx].evaluation(x);
      const auto q = w0.values.size();
      for (std::size_t a = 0; a < q; ++a) {
        for (std::size_t b = 0; b < q; ++b) {
          const double wa = w0.values[a];
          const double wb = w0.values[b];
          if (wa <= 0.0 || wb <= 0.0) continue;
          const auto k = static_cast<std::size_t>(w0.first) + a;
          const auto l = static_cast<std::size_t>(w0.first) + b;
          numer.add(t.log_weight + std::log(wa) + std::log(wb) + t.log_pair[k * static_cast<std::size_t>(t.dim) + l]);
        }
      }
    }
    return std::exp(numer.value() - log_denominator_);
  }
  double numer = 0.0;
  double denom = 0.0;
  for (std::size_t idx = 0; idx < tables_.size(); ++idx) {
    const Table& t = *tables_[idx];
    if (t.den.empty() || !std::isfinite(t.shift)) continue;
    const double alpha = std::exp(t.log_weight + t.shift - log_scale_max_);
    const auto w0 = spec_->terms[idx].evaluation(x);
    const auto q = w0.values.size();
    const auto first = static_cast<std::size_t>(w0.first);
    const auto band = static_cast<std::size_t>(t.order);
    double s = 0.0;
    for (std::size_t d = 0; d < t.den.size(); ++d) {
      const double* prow = &t.pair[d * static_cast<std::size_t>(t.dim) * band];
      for (std::size_t a = 0; a < q; ++a) {
        for (std::size_t b = 0; b < q; ++b) {
          const auto k = std::min(first + a, first + b);
          const auto off = (a > b ? a - b : b - a);
          s += w0.values[a] * w0.values[b] * prow[k * band + off];
        }
      }
    }
    numer += alpha * s / method_.samples;
    denom += alpha * t.mean_den;
  }
  if (!(denom > 0.0)) throw NumericalError("degenerate Monte Carlo denominator estimate");
  return numer / denom;
}

std::vector<double> RatioEvaluator::dimension_posterior() const {
  std::vector<double> out;
  for (const auto& t : tables_) out.push_back(std::exp(t->log_contribution() - log_denominator_));
  return out;
}

RatioResult exact_ratio(const RatioSumSpec& spec, double x, double budget) {
  return RatioEvaluator(spec, Method::exact(budget)).evaluate(x);
}

RatioResult mc_ratio(const RatioSumSpec& spec, double x, int samples, std::uint64_t seed) {
  return RatioEvaluator(spec, Method::monte_carlo(samples, seed)).evaluate(x);
}

std::vector<double> dimension_posterior(const RatioSumSpec& spec, const Method& method) {
  return RatioEvaluator(spec, method).dimension_posterior();
}

}  // namespace randseries
