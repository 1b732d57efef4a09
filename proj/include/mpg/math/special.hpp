#pragma once

namespace mpg::math {

/// Standard normal density (2*pi)^{-1/2} exp(-x^2/2).
double std_normal_pdf(double x);

double std_normal_logpdf(double x);

/// Standard normal CDF. erfc-based, keeps full relative accuracy in the
/// lower tail (max abs error well below 1e-15).
double std_normal_cdf(double x);

/// log(Phi(x)), finite for x down to around -1e154. Uses log(cdf) in the
/// central range and an asymptotic tail series below x = -20.
double std_normal_logcdf(double x);

/// Inverse Mills ratio phi(x)/Phi(x). Stable in the deep lower tail where
/// both numerator and denominator underflow.
double inverse_mills(double x);

}  // namespace mpg::math
