#pragma once

#include <functional>

namespace mpg::math {

/// Adaptive Simpson integration of f over [a, b] to the given relative
/// tolerance. Accumulates in long double. Throws std::runtime_error if the
/// subdivision limit is exhausted before every panel converged.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, int max_depth = 60);

}  // namespace mpg::math
