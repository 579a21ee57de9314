#include "randseries/spline_basis.hpp"

#include <algorithm>
#include <numbers>
#include <string>

namespace randseries {

double SparseBasisValues::sum() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

SplineBasis::SplineBasis(int order, int intervals) : order_(order), intervals_(intervals) {
  if (order < 1) throw ConfigError("spline order q must be >= 1, got " + std::to_string(order));
  if (intervals < 1) {
    throw ConfigError("subinterval count K must be >= 1, got " + std::to_string(intervals));
  }
  knots_.reserve(static_cast<std::size_t>(intervals + 2 * order - 1));
  for (int i = 0; i < order; ++i) knots_.push_back(0.0);
  for (int i = 1; i < intervals; ++i) {
    knots_.push_back(static_cast<double>(i) / static_cast<double>(intervals));
  }
  for (int i = 0; i < order; ++i) knots_.push_back(1.0);
}

SplineBasis SplineBasis::with_dimension(int order, int dimension) {
  if (dimension < order) {
    throw ConfigError("basis dimension " + std::to_string(dimension) + " is below order " +
                      std::to_string(order));
  }
  return SplineBasis(order, dimension - order + 1);
}

int SplineBasis::interval_of(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw ConfigError("basis evaluation point " + std::to_string(x) + " outside [0,1]");
  }
  const int last = intervals_ - 1;
  int m = std::clamp(static_cast<int>(x * intervals_), 0, last);
  // knots_[order_ - 1 + m] is the left end of interval m
  while (m > 0 && x < knots_[order_ - 1 + m]) --m;
  while (m < last && x >= knots_[order_ + m]) ++m;
  return m;
}

int SplineBasis::evaluate_into(double x, std::span<double> out) const {
  const int m = interval_of(x);
  const int span = m + order_ - 1;
  const int degree = order_ - 1;
  double left[64];
  double right[64];
  if (order_ > 64) throw ConfigError("spline order above 64 is not supported");
  out[0] = 1.0;
  for (int j = 1; j <= degree; ++j) {
    left[j] = x - knots_[span + 1 - j];
    right[j] = knots_[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = out[r] / (right[r + 1] + left[j - r]);
      out[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    out[j] = saved;
  }
  return m;
}

SparseBasisValues SplineBasis::evaluate(double x) const {
  SparseBasisValues result;
  result.values.resize(static_cast<std::size_t>(order_));
  result.first = evaluate_into(x, result.values);
  return result;
}

Vector SplineBasis::dense(double x) const {
  Vector out = Vector::Zero(dimension());
  const auto sparse = evaluate(x);
  for (int i = 0; i < order_; ++i) out[sparse.first + i] = sparse.values[static_cast<std::size_t>(i)];
  return out;
}

double SplineBasis::combine(const Vector& theta, double x) const {
  if (theta.size() != dimension()) throw ConfigError("coefficient length does not match basis");
  const auto sparse = evaluate(x);
  double s = 0.0;
  for (int i = 0; i < order_; ++i) s += theta[sparse.first + i] * sparse.values[static_cast<std::size_t>(i)];
  return s;
}

Vector basis_integrals(const SplineBasis& basis) {
  const int q = basis.order();
  const int J = basis.dimension();
  const double K = static_cast<double>(J - q + 1);
  Vector out(J);
  if (J - q + 1 < q - 1) {
    // the three cases overlap when K < q - 1; use the knot span form
    const auto& t = basis.knots();
    for (int idx = 0; idx < J; ++idx) out[idx] = (t[idx + q] - t[idx]) / q;
    return out;
  }
  for (int idx = 0; idx < J; ++idx) {
    const int i = idx + 1;  // 1-based in the closed form
    if (i < q) {
      out[idx] = static_cast<double>(i) / (q * K);
    } else if (i <= J - q + 1) {
      out[idx] = 1.0 / K;
    } else {
      out[idx] = static_cast<double>(J - i + 1) / (q * K);
    }
  }
  return out;
}

ScaledBasis::ScaledBasis(SplineBasis base) : base_(std::move(base)), integrals_(basis_integrals(base_)) {}

SparseBasisValues ScaledBasis::evaluate(double x) const {
  auto out = base_.evaluate(x);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] /= integrals_[out.first + static_cast<int>(i)];
  return out;
}

Vector ScaledBasis::dense(double x) const { return base_.dense(x).cwiseQuotient(integrals_); }

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double step = p0 / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    nodes[static_cast<std::size_t>(i)] = -z;
    nodes[static_cast<std::size_t>(n - 1 - i)] = z;
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

Matrix gram_matrix(const SplineBasis& basis) {
  const int q = basis.order();
  const int J = basis.dimension();
  const int K = basis.intervals();
  std::vector<double> nodes, weights;
  gauss_legendre(q, nodes, weights);
  Matrix gram = Matrix::Zero(J, J);
  std::vector<double> vals(static_cast<std::size_t>(q));
  for (int m = 0; m < K; ++m) {
    const double lo = static_cast<double>(m) / K;
    const double hi = static_cast<double>(m + 1) / K;
    for (int g = 0; g < q; ++g) {
      const double x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * nodes[static_cast<std::size_t>(g)];
      const double w = 0.5 * (hi - lo) * weights[static_cast<std::size_t>(g)];
      const int first = basis.evaluate_into(x, vals);
      for (int a = 0; a < q; ++a) {
        for (int b = 0; b < q; ++b) {
          gram(first + a, first + b) += w * vals[static_cast<std::size_t>(a)] * vals[static_cast<std::size_t>(b)];
        }
      }
    }
  }
  return gram;
}

Matrix gram_matrix(const SplineBasis& basis, std::span<const double> points) {
  const int q = basis.order();
  Matrix gram = Matrix::Zero(basis.dimension(), basis.dimension());
  if (points.empty()) return gram;
  std::vector<double> vals(static_cast<std::size_t>(q));
  for (double x : points) {
    const int first = basis.evaluate_into(x, vals);
    for (int a = 0; a < q; ++a) {
      for (int b = 0; b < q; ++b) {
        gram(first + a, first + b) += vals[static_cast<std::size_t>(a)] * vals[static_cast<std::size_t>(b)];
      }
    }
  }
  return gram / static_cast<double>(points.size());
}

Matrix design_matrix(const SplineBasis& basis, std::span<const double> points) {
  const int q = basis.order();
  Matrix design = Matrix::Zero(static_cast<Eigen::Index>(points.size()), basis.dimension());
  std::vector<double> vals(static_cast<std::size_t>(q));
  for (std::size_t r = 0; r < points.size(); ++r) {
    const int first = basis.evaluate_into(points[r], vals);
    for (int a = 0; a < q; ++a) design(static_cast<Eigen::Index>(r), first + a) = vals[static_cast<std::size_t>(a)];
  }
  return design;
}

Vector least_squares_fit(const SplineBasis& basis, std::span<const double> xs,
                         std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ConfigError("least_squares_fit: xs and ys differ in length");
  const Matrix design = design_matrix(basis, xs);
  const Eigen::Map<const Vector> target(ys.data(), static_cast<Eigen::Index>(ys.size()));
  const Matrix normal = design.transpose() * design;
  Eigen::LDLT<Matrix> ldlt(normal);
  const Vector diag = ldlt.vectorD();
  const double scale = normal.diagonal().maxCoeff();
  if (ldlt.info() != Eigen::Success || !(scale > 0.0) || diag.minCoeff() <= 1e-13 * scale) {
    throw NumericalError("least_squares_fit: singular normal equations (grid too coarse for J=" +
                         std::to_string(basis.dimension()) + ")");
  }
  return ldlt.solve(design.transpose() * target);
}

}  // namespace randseries
