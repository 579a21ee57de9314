#pragma once

#include <functional>

namespace randseries {

/// Adaptive Gauss-Kronrod (7/15) quadrature on a finite interval. Splits the
/// interval with the largest error estimate until the summed estimate is below
/// abs_tol. Throws NumericalError when max_intervals is exhausted first.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                          int max_intervals = 20000);

}  // namespace randseries
