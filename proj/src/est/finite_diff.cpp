#include "mpg/est/finite_diff.hpp"

#include <cmath>
#include <stdexcept>

namespace mpg::est {

double finite_diff_check(
    const std::function<double(std::span<const double>)>& objective,
    const std::function<std::vector<double>(std::span<const double>)>& gradient,
    std::span<const double> params, double h) {
  if (!(h > 1e-8 && h < 1e-2)) {
    throw std::invalid_argument("finite_diff_check: h out of range");
  }
  std::vector<double> theta(params.begin(), params.end());
  const std::vector<double> analytic = gradient(theta);
  if (analytic.size() != theta.size()) {
    throw std::invalid_argument("finite_diff_check: gradient size mismatch");
  }
  double worst = 0.0;
  for (size_t i = 0; i < theta.size(); ++i) {
    const double saved = theta[i];
    theta[i] = saved + h;
    const double up = objective(theta);
    theta[i] = saved - h;
    const double down = objective(theta);
    theta[i] = saved;
    const double fd = (up - down) / (2.0 * h);
    const double err =
        std::fabs(fd - analytic[i]) / std::max(1.0, std::fabs(analytic[i]));
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace mpg::est
