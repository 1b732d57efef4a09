#include "mpg/math/mfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mpg/math/quadrature.hpp"
#include "mpg/math/special.hpp"

namespace mpg::math {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// Below this the forward recurrence subtracts near-equal quantities.
constexpr double kForwardThreshold = -0.5;

void check_args(int d, double alpha) {
  if (d < 0) throw std::invalid_argument("m_function: d must be >= 0");
  if (!std::isfinite(alpha)) {
    throw std::invalid_argument("m_function: alpha must be finite");
  }
}

double forward_recursion(int d, double alpha) {
  const double m0 = std_normal_cdf(alpha);
  if (d == 0) return m0;
  double prev = m0;
  double cur = alpha * m0 + std_normal_pdf(alpha);
  for (int k = 2; k <= d; ++k) {
    const double next = alpha * cur + static_cast<double>(k - 1) * prev;
    if (!std::isfinite(next)) {
      throw std::overflow_error("m_function: recursion overflow");
    }
    prev = cur;
    cur = next;
  }
  return cur;
}

// Backward (Miller) pass for alpha < 0. Returns log of the scaled minimal
// solution at k = 0..d; the overall scale is arbitrary, only differences of
// entries are meaningful. Contamination by the dominant solution decays like
// exp(-2|alpha|(sqrt(N) - sqrt(d))), which fixes the start index N.
std::vector<double> miller_log_profile(int d, double alpha) {
  const double abs_a = std::min(std::max(std::fabs(alpha), 0.5), 22.0);
  const double root = std::sqrt(static_cast<double>(d)) + 22.0 / abs_a;
  const int start = static_cast<int>(root * root) + 2;

  std::vector<double> out(static_cast<size_t>(d) + 1);
  const double log_rescale = 280.0 * std::log(10.0);
  long double above = 0.0L;   // value at k+1
  long double at = 1.0L;      // value at k
  double log_scale = 0.0;     // true value = stored value * exp(log_scale)
  for (int k = start; k >= 0; --k) {
    if (k <= d) {
      out[static_cast<size_t>(k)] = static_cast<double>(logl(at)) + log_scale;
    }
    if (k == 0) break;
    // M_{k+1} = a*M_k + k*M_{k-1}  =>  M_{k-1} = (M_{k+1} - a*M_k)/k
    const long double below =
        (above - static_cast<long double>(alpha) * at) / static_cast<long double>(k);
    above = at;
    at = below;
    if (at > 1e280L) {
      at *= 1e-280L;
      above *= 1e-280L;
      log_scale += log_rescale;
    } else if (at < 1e-280L && at > 0.0L) {
      at *= 1e280L;
      above *= 1e280L;
      log_scale -= log_rescale;
    }
  }
  return out;
}

}  // namespace

double log_m_function(int d, double alpha) {
  check_args(d, alpha);
  if (alpha >= kForwardThreshold) {
    return std::log(forward_recursion(d, alpha));
  }
  const std::vector<double> profile = miller_log_profile(d, alpha);
  return std_normal_logcdf(alpha) + profile[static_cast<size_t>(d)] - profile[0];
}

double m_function(int d, double alpha) {
  check_args(d, alpha);
  if (alpha >= kForwardThreshold) {
    return forward_recursion(d, alpha);
  }
  const double log_value = log_m_function(d, alpha);
  if (log_value > std::log(std::numeric_limits<double>::max())) {
    throw std::overflow_error("m_function: value overflows double");
  }
  if (log_value < std::log(std::numeric_limits<double>::min())) {
    throw std::underflow_error("m_function: value underflows double");
  }
  return std::exp(log_value);
}

double m_function_quadrature(int d, double alpha, double rel_tol) {
  check_args(d, alpha);
  if (!(rel_tol > 1e-14 && rel_tol < 1e-2)) {
    throw std::invalid_argument("m_function_quadrature: rel_tol out of range");
  }
  // The integrand is negligible past alpha + 40; keep a floor on the upper
  // limit so the interval stays usable for very negative alpha.
  const double upper = std::max(alpha + 40.0, 10.0);
  const auto integrand = [d, alpha](double u) -> double {
    if (u <= 0.0) {
      return d == 0 ? std::exp(-0.5 * alpha * alpha - kLogSqrt2Pi) : 0.0;
    }
    const double t = u - alpha;
    return std::exp(d * std::log(u) - 0.5 * t * t - kLogSqrt2Pi);
  };
  return integrate_adaptive(integrand, 0.0, upper, rel_tol);
}

double m_ratio(int d, double alpha) {
  if (d < 1) throw std::invalid_argument("m_ratio: d must be >= 1");
  if (!std::isfinite(alpha)) {
    throw std::invalid_argument("m_ratio: alpha must be finite");
  }
  if (d == 1) return inverse_mills(alpha);
  if (alpha >= kForwardThreshold) {
    // r_k = M_k/M_{k-1} = alpha + (k-1)/r_{k-1}
    double r = alpha + inverse_mills(alpha);  // r_1
    for (int k = 2; k <= d - 1; ++k) {
      r = alpha + static_cast<double>(k - 1) / r;
    }
    return static_cast<double>(d - 1) / r;
  }
  const std::vector<double> profile = miller_log_profile(d - 1, alpha);
  return static_cast<double>(d - 1) *
         std::exp(profile[static_cast<size_t>(d - 2)] -
                  profile[static_cast<size_t>(d - 1)]);
}

}  // namespace mpg::math
