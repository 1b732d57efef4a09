#include "mpg/math/special.hpp"

#include <cmath>
#include <limits>

namespace mpg::math {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
}  // namespace

double std_normal_pdf(double x) {
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double std_normal_logpdf(double x) {
  return -0.5 * x * x - kLogSqrt2Pi;
}

double std_normal_cdf(double x) {
  if (std::isinf(x)) return x > 0.0 ? 1.0 : 0.0;
  const double xs = x * kInvSqrt2;
  const double z = std::fabs(xs);
  double y;
  if (z < kInvSqrt2) {
    y = 0.5 + 0.5 * std::erf(xs);
  } else {
    y = 0.5 * std::erfc(z);
    if (xs > 0.0) y = 1.0 - y;
  }
  return y;
}

double std_normal_logcdf(double x) {
  if (x > 6.0) {
    // log(1 - p) ~ -p for the tiny upper-tail mass p
    return -std_normal_cdf(-x);
  }
  if (x > -20.0) {
    return std::log(std_normal_cdf(x));
  }
  // Phi(x) = phi(x)/(-x) * [1 - 1/x^2 + 3/x^4 - ...] for x << 0
  const double xsq = x * x;
  double last = 0.0;
  double series = 1.0;
  double numerator = 1.0;
  double factor = 1.0;
  const double inv_xsq = 1.0 / xsq;
  double sign = 1.0;
  long i = 0;
  while (std::fabs(last - series) > std::numeric_limits<double>::epsilon()) {
    ++i;
    last = series;
    sign = -sign;
    factor *= inv_xsq;
    numerator *= static_cast<double>(2 * i - 1);
    series = std::fma(sign * numerator, factor, series);
  }
  return -0.5 * xsq - std::log(-x) - kLogSqrt2Pi + std::log(series);
}

double inverse_mills(double x) {
  if (x > -1.0) {
    return std_normal_pdf(x) / std_normal_cdf(x);
  }
  return std::exp(std_normal_logpdf(x) - std_normal_logcdf(x));
}

}  // namespace mpg::math
