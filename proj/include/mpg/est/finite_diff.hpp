#pragma once

#include <functional>
#include <span>
#include <vector>

namespace mpg::est {

/// Central-difference check of an analytic gradient. `objective` maps a
/// parameter vector to a scalar; `gradient` maps it to the analytic gradient.
/// Returns the worst per-coordinate error |fd_i - g_i| / max(1, |g_i|).
/// h must lie in (1e-8, 1e-2).
double finite_diff_check(
    const std::function<double(std::span<const double>)>& objective,
    const std::function<std::vector<double>(std::span<const double>)>& gradient,
    std::span<const double> params, double h);

}  // namespace mpg::est
