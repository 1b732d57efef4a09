#pragma once

#include <string>
#include <vector>

namespace mpg::cli {

struct CheckRow {
  std::string name;
  double observed = 0.0;   // worst error / statistic for the row
  double threshold = 0.0;  // pass when observed <= threshold
  bool pass = false;
};

struct CheckSuiteResult {
  std::string suite;
  std::vector<CheckRow> rows;
  bool pass = false;
};

/// Recursion vs quadrature over d in 0..10, alpha in -5..5 step 0.5, plus
/// the recurrence-residual and derivative identities.
CheckSuiteResult run_mfun_suite();

/// Analytic scores vs central finite differences: Gaussian, angular,
/// clipped boundary/interior, wrapped angle (100 random configurations
/// each) and MLP backward (50 configurations).
CheckSuiteResult run_grads_suite();

/// Density normalization: angular on the circle, clipped total mass,
/// Gaussian 1-D grid.
CheckSuiteResult run_normalization_suite();

/// Radial decomposition: gaussian minus angular score equals the
/// finite-differenced log radial conditional.
CheckSuiteResult run_polar_suite();

/// Clipped-bandit variance gap: nonnegative and equal to the coupled
/// mean squared score difference within bootstrap error.
CheckSuiteResult run_capg_suite();

std::vector<CheckSuiteResult> run_check_suites(
    const std::vector<std::string>& names);

}  // namespace mpg::cli
