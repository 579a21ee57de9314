#include "randseries/priors.hpp"

#include <charconv>
#include <numbers>
#include <sstream>

namespace randseries {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_real(std::string_view field, std::string_view what) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, value);
  if (field.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(value)) {
    throw ConfigError("invalid " + std::string(what) + " '" + std::string(field) + "'");
  }
  return value;
}

int parse_int(std::string_view field, std::string_view what) {
  int value = 0;
  const auto* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, value);
  if (field.empty() || res.ec != std::errc() || res.ptr != end) {
    throw ConfigError("invalid " + std::string(what) + " '" + std::string(field) + "'");
  }
  return value;
}

std::string format_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

DimensionPrior::DimensionPrior(Family family, std::vector<double> params, int j_min, int j_max)
    : family_(family), params_(std::move(params)), j_min_(j_min), j_max_(j_max) {
  if (j_min < 1 || j_max < j_min) {
    throw ConfigError("dimension prior truncation needs 1 <= j_min <= j_max, got [" +
                      std::to_string(j_min) + "," + std::to_string(j_max) + "]");
  }
  LogSumExp total;
  std::vector<double> raw;
  for (int j = j_min; j <= j_max; ++j) {
    raw.push_back(family_log_pmf(j));
    total.add(raw.back());
  }
  const double norm = total.value();
  if (!std::isfinite(norm)) throw ConfigError("dimension prior has no mass on its truncation range");
  for (double v : raw) log_pmf_.push_back(v - norm);
}

DimensionPrior DimensionPrior::geometric(double p, int j_min, int j_max) {
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("geometric prior needs 0 < p < 1");
  return DimensionPrior(Family::geometric, {p}, j_min, j_max);
}

DimensionPrior DimensionPrior::poisson(double lambda, int j_min, int j_max) {
  if (!(lambda > 0.0)) throw ConfigError("poisson prior needs lambda > 0");
  return DimensionPrior(Family::poisson, {lambda}, j_min, j_max);
}

DimensionPrior DimensionPrior::negative_binomial(double r, double p, int j_min, int j_max) {
  if (!(r > 0.0) || !(p > 0.0 && p < 1.0)) throw ConfigError("negbin prior needs r > 0 and 0 < p < 1");
  return DimensionPrior(Family::negative_binomial, {r, p}, j_min, j_max);
}

DimensionPrior DimensionPrior::uniform(int j_min, int j_max) {
  return DimensionPrior(Family::uniform, {}, j_min, j_max);
}

DimensionPrior DimensionPrior::fixed(int j) { return geometric(0.5, j, j); }

DimensionPrior DimensionPrior::parse(std::string_view text) {
  const auto f = split(text, ':');
  const auto family = f[0];
  auto need = [&](std::size_t n) {
    if (f.size() != n) {
      throw ConfigError("dimension prior '" + std::string(text) + "' expects " + std::to_string(n - 1) +
                        " fields after the family name");
    }
  };
  if (family == "geom" || family == "geometric") {
    need(4);
    return geometric(parse_real(f[1], "geometric p"), parse_int(f[2], "j_min"), parse_int(f[3], "j_max"));
  }
  if (family == "poisson") {
    need(4);
    return poisson(parse_real(f[1], "poisson lambda"), parse_int(f[2], "j_min"), parse_int(f[3], "j_max"));
  }
  if (family == "negbin") {
    need(5);
    return negative_binomial(parse_real(f[1], "negbin r"), parse_real(f[2], "negbin p"),
                             parse_int(f[3], "j_min"), parse_int(f[4], "j_max"));
  }
  if (family == "uniform") {
    need(3);
    return uniform(parse_int(f[1], "j_min"), parse_int(f[2], "j_max"));
  }
  if (family == "fixed") {
    need(2);
    return fixed(parse_int(f[1], "fixed dimension"));
  }
  throw ConfigError("unknown dimension prior family '" + std::string(family) + "'");
}

double DimensionPrior::family_log_pmf(int j) const {
  switch (family_) {
    case Family::geometric:
      if (j < 1) return kNegInf;
      return std::log(params_[0]) + (j - 1) * std::log1p(-params_[0]);
    case Family::poisson:
      if (j < 0) return kNegInf;
      return -params_[0] + j * std::log(params_[0]) - log_gamma(j + 1.0);
    case Family::negative_binomial: {
      if (j < 0) return kNegInf;
      const double r = params_[0];
      const double p = params_[1];
      return log_gamma(j + r) - log_gamma(r) - log_gamma(j + 1.0) + r * std::log(p) + j * std::log1p(-p);
    }
    case Family::uniform:
      if (j < j_min_ || j > j_max_) return kNegInf;
      return -std::log(static_cast<double>(j_max_ - j_min_ + 1));
  }
  return kNegInf;
}

double DimensionPrior::log_pmf(int j) const {
  if (j < j_min_ || j > j_max_) {
    throw ConfigError("dimension " + std::to_string(j) + " outside prior range [" + std::to_string(j_min_) +
                      "," + std::to_string(j_max_) + "]");
  }
  return log_pmf_[static_cast<std::size_t>(j - j_min_)];
}

double DimensionPrior::log_survival(int j) const {
  if (family_ == Family::geometric) return j < 1 ? 0.0 : j * std::log1p(-params_[0]);
  if (family_ == Family::uniform) {
    if (j >= j_max_) return kNegInf;
    return std::log(static_cast<double>(j_max_ - std::max(j, j_min_ - 1))) - std::log(static_cast<double>(size()));
  }
  LogSumExp tail;
  for (int k = std::max(j + 1, 0); k < j + 1 + 100000; ++k) {
    const double v = family_log_pmf(k);
    tail.add(v);
    if (k > j + 50 && v < tail.value() - 40.0) break;
  }
  return tail.value();
}

std::string DimensionPrior::to_string() const {
  const auto range = ":" + std::to_string(j_min_) + ":" + std::to_string(j_max_);
  switch (family_) {
    case Family::geometric:
      return "geom:" + format_real(params_[0]) + range;
    case Family::poisson:
      return "poisson:" + format_real(params_[0]) + range;
    case Family::negative_binomial:
      return "negbin:" + format_real(params_[0]) + ":" + format_real(params_[1]) + range;
    case Family::uniform:
      return "uniform" + range;
  }
  return {};
}

CoefficientPrior::CoefficientPrior(Family family, std::vector<double> first, std::vector<double> second)
    : family_(family), first_(std::move(first)), second_(std::move(second)) {
  if (first_.empty()) throw ConfigError("coefficient prior needs at least one parameter");
  for (double v : first_) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("coefficient prior parameters must be positive");
  }
  for (double v : second_) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("coefficient prior parameters must be positive");
  }
}

CoefficientPrior CoefficientPrior::dirichlet(std::vector<double> alpha) {
  return CoefficientPrior(Family::dirichlet, std::move(alpha), {});
}

CoefficientPrior CoefficientPrior::gamma(std::vector<double> shape, std::vector<double> rate) {
  if (shape.size() != rate.size()) throw ConfigError("gamma prior: shape and rate lengths differ");
  return CoefficientPrior(Family::gamma, std::move(shape), std::move(rate));
}

CoefficientPrior CoefficientPrior::beta(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) throw ConfigError("beta prior: parameter lengths differ");
  return CoefficientPrior(Family::beta, std::move(a), std::move(b));
}

CoefficientPrior CoefficientPrior::normal(double variance) {
  return CoefficientPrior(Family::normal, {variance}, {});
}

CoefficientPrior CoefficientPrior::parse(std::string_view text) {
  const auto f = split(text, ':');
  const auto family = f[0];
  auto need = [&](std::size_t n) {
    if (f.size() != n) {
      throw ConfigError("coefficient prior '" + std::string(text) + "' expects " + std::to_string(n - 1) +
                        " fields after the family name");
    }
  };
  if (family == "dirichlet") {
    need(2);
    return dirichlet({parse_real(f[1], "dirichlet concentration")});
  }
  if (family == "gamma") {
    need(3);
    return gamma({parse_real(f[1], "gamma shape")}, {parse_real(f[2], "gamma rate")});
  }
  if (family == "beta") {
    need(3);
    return beta({parse_real(f[1], "beta a")}, {parse_real(f[2], "beta b")});
  }
  if (family == "normal") {
    need(2);
    return normal(parse_real(f[1], "normal variance"));
  }
  throw ConfigError("unknown coefficient prior family '" + std::string(family) + "'");
}

double CoefficientPrior::first(int k) const {
  return first_.size() == 1 ? first_[0] : first_.at(static_cast<std::size_t>(k));
}

double CoefficientPrior::second(int k) const {
  if (second_.empty()) throw ConfigError("coefficient prior has no second parameter");
  return second_.size() == 1 ? second_[0] : second_.at(static_cast<std::size_t>(k));
}

void CoefficientPrior::check_dimension(int j) const {
  if (j < 1) throw ConfigError("coefficient dimension must be positive");
  if (family_ == Family::normal) return;
  if (first_.size() != 1 && first_.size() != static_cast<std::size_t>(j)) {
    throw ConfigError("coefficient prior has " + std::to_string(first_.size()) +
                      " parameters but dimension is " + std::to_string(j));
  }
}

Vector CoefficientPrior::sample(int j, Rng& rng) const {
  check_dimension(j);
  Vector theta(j);
  switch (family_) {
    case Family::dirichlet: {
      for (int k = 0; k < j; ++k) theta[k] = std::gamma_distribution<double>(first(k), 1.0)(rng);
      theta /= theta.sum();
      break;
    }
    case Family::gamma:
      for (int k = 0; k < j; ++k) theta[k] = std::gamma_distribution<double>(first(k), 1.0 / second(k))(rng);
      break;
    case Family::beta:
      for (int k = 0; k < j; ++k) {
        const double x = std::gamma_distribution<double>(first(k), 1.0)(rng);
        const double y = std::gamma_distribution<double>(second(k), 1.0)(rng);
        theta[k] = x / (x + y);
      }
      break;
    case Family::normal: {
      std::normal_distribution<double> normal(0.0, std::sqrt(variance()));
      for (int k = 0; k < j; ++k) theta[k] = normal(rng);
      break;
    }
  }
  return theta;
}

double CoefficientPrior::log_density(const Vector& theta) const {
  const int j = static_cast<int>(theta.size());
  check_dimension(j);
  double out = 0.0;
  switch (family_) {
    case Family::dirichlet: {
      if (std::abs(theta.sum() - 1.0) > 1e-9 || theta.minCoeff() < 0.0) {
        throw ConfigError("point is off the probability simplex");
      }
      double total = 0.0;
      for (int k = 0; k < j; ++k) {
        total += first(k);
        out += (first(k) - 1.0) * std::log(theta[k]) - log_gamma(first(k));
      }
      return out + log_gamma(total);
    }
    case Family::gamma:
      for (int k = 0; k < j; ++k) {
        if (!(theta[k] > 0.0)) throw ConfigError("gamma prior support is (0, inf)");
        const double a = first(k);
        const double b = second(k);
        out += a * std::log(b) - log_gamma(a) + (a - 1.0) * std::log(theta[k]) - b * theta[k];
      }
      return out;
    case Family::beta:
      for (int k = 0; k < j; ++k) {
        if (!(theta[k] > 0.0 && theta[k] < 1.0)) throw ConfigError("beta prior support is (0, 1)");
        out += (first(k) - 1.0) * std::log(theta[k]) + (second(k) - 1.0) * std::log1p(-theta[k]) -
               log_beta(first(k), second(k));
      }
      return out;
    case Family::normal: {
      const double v = variance();
      return -0.5 * j * std::log(2.0 * std::numbers::pi * v) - 0.5 * theta.squaredNorm() / v;
    }
  }
  return out;
}

std::string CoefficientPrior::to_string() const {
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_real(v[i]);
    return s;
  };
  switch (family_) {
    case Family::dirichlet:
      return "dirichlet:" + list(first_);
    case Family::gamma:
      return "gamma:" + list(first_) + ":" + list(second_);
    case Family::beta:
      return "beta:" + list(first_) + ":" + list(second_);
    case Family::normal:
      return "normal:" + list(first_);
  }
  return {};
}

}  // namespace randseries
