#pragma once

namespace mpg::math {

// The Gaussian half-line moment family
//   M_d(a) = (2*pi)^{-1/2} \int_0^inf u^d exp(-(u-a)^2/2) du,
// with M_0 = Phi(a), M_1 = a*Phi(a) + phi(a) and the two-term recurrence
//   M_k = a*M_{k-1} + (k-1)*M_{k-2}.
// M_d is strictly positive and increasing in a.

/// M_d(a) by recurrence. Forward recursion for a >= -0.5; a backward
/// (Miller-normalized) pass below that, where M_d is the minimal solution
/// and the forward direction loses digits to cancellation.
/// Throws std::overflow_error / std::underflow_error when the value leaves
/// the representable range.
double m_function(int d, double alpha);

/// Independent evaluation of the defining integral by adaptive quadrature
/// over [0, alpha + 40]; the oracle for m_function. rel_tol must lie in
/// (1e-14, 1e-2).
double m_function_quadrature(int d, double alpha, double rel_tol);

/// log M_d(a); finite far into the lower tail where M_d itself underflows.
double log_m_function(int d, double alpha);

/// M'_{d-1}(a) / M_{d-1}(a), i.e. (d-1)*M_{d-2}(a)/M_{d-1}(a) for d >= 2 and
/// phi(a)/Phi(a) for d = 1. Finite for |a| <= 40 and beyond; computed from
/// ratio recursions so no individual M value is ever formed.
double m_ratio(int d, double alpha);

}  // namespace mpg::math
