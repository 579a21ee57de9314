#pragma once

#include <span>
#include <vector>

#include "randseries/common.hpp"

namespace randseries {

/// Nonzero basis values at one point: values[i] is B_{first + i}(x).
/// Always holds exactly q entries (some may be zero at knots).
struct SparseBasisValues {
  int first = 0;
  std::vector<double> values;

  double sum() const;
};

/// Uniform B-spline basis of order q (degree q-1) on [0,1] with K equal
/// subintervals and a clamped knot vector. Dimension J = q + K - 1.
/// Basis indices are 0-based throughout the library.
class SplineBasis {
 public:
  SplineBasis(int order, int intervals);

  /// Basis with dimension J for the given order; requires J >= q.
  static SplineBasis with_dimension(int order, int dimension);

  int order() const { return order_; }
  int intervals() const { return intervals_; }
  int dimension() const { return order_ + intervals_ - 1; }
  const std::vector<double>& knots() const { return knots_; }

  /// Subinterval containing x; knots belong to the interval on their right and
  /// x = 1 belongs to the last one.
  int interval_of(double x) const;

  SparseBasisValues evaluate(double x) const;

  /// Writes the q nonzero values into out (size q) and returns the first index.
  int evaluate_into(double x, std::span<double> out) const;

  /// Dense length-J evaluation.
  Vector dense(double x) const;

  /// theta^T B(x).
  double combine(const Vector& theta, double x) const;

 private:
  int order_;
  int intervals_;
  std::vector<double> knots_;
};

/// Closed-form integrals of each basis function over [0,1].
Vector basis_integrals(const SplineBasis& basis);

/// Density-normalized basis B*_i = B_i / integral(B_i).
class ScaledBasis {
 public:
  explicit ScaledBasis(SplineBasis base);

  const SplineBasis& base() const { return base_; }
  const Vector& integrals() const { return integrals_; }
  int dimension() const { return base_.dimension(); }
  int order() const { return base_.order(); }

  SparseBasisValues evaluate(double x) const;
  Vector dense(double x) const;

 private:
  SplineBasis base_;
  Vector integrals_;
};

inline ScaledBasis make_scaled(const SplineBasis& basis) { return ScaledBasis(basis); }

/// Gram matrix with respect to Lebesgue measure on [0,1] (exact, per-interval
/// Gauss-Legendre).
Matrix gram_matrix(const SplineBasis& basis);

/// Gram matrix with respect to the empirical measure of the given points.
Matrix gram_matrix(const SplineBasis& basis, std::span<const double> points);

/// Design matrix with rows B(x_i)^T.
Matrix design_matrix(const SplineBasis& basis, std::span<const double> points);

/// Least-squares coefficients of the spline closest to (xs, ys) in mean
/// squared error. Throws NumericalError when the normal equations are singular.
Vector least_squares_fit(const SplineBasis& basis, std::span<const double> xs,
                         std::span<const double> ys);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace randseries
