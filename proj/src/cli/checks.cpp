#include "mpg/cli/checks.hpp"

#include <cmath>
#include <stdexcept>

#include "mpg/common/random.hpp"
#include "mpg/dist/angular.hpp"
#include "mpg/dist/clipped.hpp"
#include "mpg/dist/gaussian.hpp"
#include "mpg/dist/wrapped_angle.hpp"
#include "mpg/est/finite_diff.hpp"
#include "mpg/est/variance.hpp"
#include "mpg/math/mfun.hpp"
#include "mpg/math/quadrature.hpp"
#include "mpg/nn/mlp.hpp"
#include "mpg/train/policy.hpp"

namespace mpg::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

using dist::ClipInterval;
using dist::DiagGaussianParams;
using dist::ScoreVector;
using dist::UnitVector;

DiagGaussianParams unflatten(std::span<const double> theta) {
  std::vector<double> mean(theta.begin(), theta.end() - 1);
  return DiagGaussianParams(std::move(mean), theta.back());
}

std::vector<double> flatten_score(const ScoreVector& s) {
  std::vector<double> out = s.d_mean;
  out.push_back(s.d_sigma);
  return out;
}

void finish(CheckSuiteResult& result) {
  result.pass = true;
  for (const CheckRow& row : result.rows) result.pass = result.pass && row.pass;
}

CheckRow make_row(std::string name, double observed, double threshold) {
  CheckRow row;
  row.name = std::move(name);
  row.observed = observed;
  row.threshold = threshold;
  row.pass = observed <= threshold;
  return row;
}

}  // namespace

CheckSuiteResult run_mfun_suite() {
  CheckSuiteResult result;
  result.suite = "mfun";

  double worst_grid = 0.0;
  for (int d = 0; d <= 10; ++d) {
    for (int i = 0; i <= 20; ++i) {
      const double alpha = -5.0 + 0.5 * i;
      const double rec = math::m_function(d, alpha);
      const double quad = math::m_function_quadrature(d, alpha, 1e-10);
      worst_grid = std::max(worst_grid, std::fabs(rec - quad) / quad);
    }
  }
  result.rows.push_back(make_row("recursion_vs_quadrature_rel_err", worst_grid, 1e-8));

  double worst_residual = 0.0;
  for (double alpha : {-1.0, 0.0, 0.5, 2.0}) {
    for (int k = 2; k <= 8; ++k) {
      const double mk = math::m_function_quadrature(k, alpha, 1e-13);
      const double mk1 = math::m_function_quadrature(k - 1, alpha, 1e-13);
      const double mk2 = math::m_function_quadrature(k - 2, alpha, 1e-13);
      const double residual =
          std::fabs(mk - alpha * mk1 - static_cast<double>(k - 1) * mk2);
      worst_residual = std::max(worst_residual, residual / (1e-12 * mk));
    }
  }
  result.rows.push_back(
      make_row("recurrence_residual_over_tolerance", worst_residual, 1.0));

  double worst_deriv = 0.0;
  const double h = 1e-5;
  for (int d = 1; d <= 8; ++d) {
    for (double alpha : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
      const double fd =
          (math::m_function(d, alpha + h) - math::m_function(d, alpha - h)) /
          (2.0 * h);
      const double analytic = d * math::m_function(d - 1, alpha);
      worst_deriv = std::max(worst_deriv, std::fabs(fd - analytic) / analytic);
    }
  }
  result.rows.push_back(make_row("derivative_identity_rel_err", worst_deriv, 1e-6));

  finish(result);
  return result;
}

CheckSuiteResult run_grads_suite() {
  CheckSuiteResult result;
  result.suite = "grads";
  RandomStream rng(0xf00d);
  const double h = 1e-5;

  double gauss = 0.0, angular = 0.0, clip_interior = 0.0, clip_boundary = 0.0,
         wrapped = 0.0;
  int n_gauss = 0, n_ang = 0, n_ci = 0, n_cb = 0, n_wrap = 0;
  while (n_gauss < 100 || n_ang < 100 || n_ci < 100 || n_cb < 100 ||
         n_wrap < 100) {
    const double sigma = rng.uniform(0.05, 1.0);
    const int d = 2 + static_cast<int>(rng.uniform_index(2));
    std::vector<double> mean(static_cast<size_t>(d));
    for (auto& c : mean) c = rng.uniform(-2.0, 2.0);

    if (n_gauss < 100) {
      const DiagGaussianParams p(mean, sigma);
      RandomStream local(rng.engine()());
      const auto a = dist::gaussian_sample(p, local);
      std::vector<double> theta = mean;
      theta.push_back(sigma);
      gauss = std::max(gauss, est::finite_diff_check(
          [&](std::span<const double> t) {
            return dist::gaussian_log_density(unflatten(t), a);
          },
          [&](std::span<const double> t) {
            return flatten_score(dist::gaussian_score(unflatten(t), a));
          },
          theta, h));
      ++n_gauss;
    }
    if (n_ang < 100) {
      const DiagGaussianParams p(mean, sigma);
      RandomStream local(rng.engine()());
      const auto x = dist::angular_sample(p, local);
      std::vector<double> theta = mean;
      theta.push_back(sigma);
      angular = std::max(angular, est::finite_diff_check(
          [&](std::span<const double> t) {
            return dist::angular_log_density(unflatten(t), x);
          },
          [&](std::span<const double> t) {
            return flatten_score(dist::angular_score(unflatten(t), x));
          },
          theta, h));
      ++n_ang;
    }
    {
      const std::vector<double> mean1{rng.uniform(-1.5, 1.5)};
      const double lo = rng.uniform(-2.0, 0.0);
      const ClipInterval interval(lo, lo + rng.uniform(0.5, 3.0));
      const DiagGaussianParams p(mean1, sigma);
      RandomStream local(rng.engine()());
      const auto a = dist::gaussian_sample(p, local);
      const double b = std::min(std::max(a[0], interval.lo), interval.hi);
      const bool boundary = (b == interval.lo || b == interval.hi);
      if ((boundary && n_cb < 100) || (!boundary && n_ci < 100)) {
        std::vector<double> theta = mean1;
        theta.push_back(sigma);
        const double err = est::finite_diff_check(
            [&](std::span<const double> t) {
              return dist::clipped_log_density(unflatten(t), interval, b);
            },
            [&](std::span<const double> t) {
              return flatten_score(dist::clipped_score(unflatten(t), interval, b));
            },
            theta, h);
        if (boundary) {
          clip_boundary = std::max(clip_boundary, err);
          ++n_cb;
        } else {
          clip_interior = std::max(clip_interior, err);
          ++n_ci;
        }
      }
    }
    if (n_wrap < 100) {
      const double mu = rng.uniform(-3.0, 3.0);
      const double a = mu + sigma * rng.normal();
      const std::vector<double> theta{mu, sigma};
      wrapped = std::max(wrapped, est::finite_diff_check(
          [&](std::span<const double> t) {
            return dist::wrapped_angle_log_density(t[0], t[1], a);
          },
          [&](std::span<const double> t) {
            return flatten_score(dist::wrapped_angle_score(t[0], t[1], a));
          },
          theta, h));
      ++n_wrap;
    }
  }
  result.rows.push_back(make_row("gaussian_score_fd", gauss, 1e-5));
  result.rows.push_back(make_row("angular_score_fd", angular, 1e-5));
  result.rows.push_back(make_row("clipped_interior_fd", clip_interior, 1e-5));
  result.rows.push_back(make_row("clipped_boundary_fd", clip_boundary, 1e-5));
  result.rows.push_back(make_row("wrapped_angle_fd", wrapped, 1e-5));

  double mlp = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int in = 1 + static_cast<int>(rng.uniform_index(3));
    const int out = 1 + static_cast<int>(rng.uniform_index(3));
    const nn::Activation act = (trial % 3 == 0)   ? nn::Activation::kSelu
                               : (trial % 3 == 1) ? nn::Activation::kTanh
                                                  : nn::Activation::kIdentity;
    const nn::MlpSpec spec = nn::MlpSpec::make(
        in, out, 1 + static_cast<int>(rng.uniform_index(2)), 6, act,
        rng.engine()());
    const nn::FlatParams params = nn::init_params(spec);
    std::vector<double> input(static_cast<size_t>(in));
    std::vector<double> upstream(static_cast<size_t>(out));
    for (auto& v : input) v = rng.uniform(-1.5, 1.5);
    for (auto& v : upstream) v = rng.uniform(-1.0, 1.0);
    mlp = std::max(mlp, est::finite_diff_check(
        [&](std::span<const double> theta) {
          nn::FlatParams q = params;
          q.values.assign(theta.begin(), theta.end());
          const auto y = nn::forward(spec, q, input);
          double acc = 0.0;
          for (int i = 0; i < out; ++i) acc += upstream[static_cast<size_t>(i)] * y[static_cast<size_t>(i)];
          return acc;
        },
        [&](std::span<const double> theta) {
          nn::FlatParams q = params;
          q.values.assign(theta.begin(), theta.end());
          return nn::backward(spec, q, input, upstream).values;
        },
        params.values, h));
  }
  result.rows.push_back(make_row("mlp_backward_fd", mlp, 1e-5));

  finish(result);
  return result;
}

CheckSuiteResult run_normalization_suite() {
  CheckSuiteResult result;
  result.suite = "normalization";
  RandomStream rng(0x4042);
  double worst_angular = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<double> m{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    const DiagGaussianParams params(m, rng.uniform(0.1, 1.0));
    const int nodes = 10000;
    double total = 0.0;
    for (int i = 0; i < nodes; ++i) {
      const double theta = 2.0 * kPi * i / nodes;
      const UnitVector x(std::vector<double>{std::cos(theta), std::sin(theta)});
      total += std::exp(dist::angular_log_density(params, x));
    }
    total *= 2.0 * kPi / nodes;
    worst_angular = std::max(worst_angular, std::fabs(total - 1.0));
  }
  result.rows.push_back(make_row("angular_circle_mass_err", worst_angular, 1e-6));

  double worst_clip = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const DiagGaussianParams p({rng.uniform(-1.5, 1.5)}, rng.uniform(0.2, 1.5));
    const double lo = rng.uniform(-2.0, 0.0);
    const ClipInterval interval(lo, lo + rng.uniform(0.5, 3.0));
    const double mass_lo = std::exp(dist::clipped_log_density(p, interval, interval.lo));
    const double mass_hi = std::exp(dist::clipped_log_density(p, interval, interval.hi));
    const double interior = math::integrate_adaptive(
        [&](double b) {
          const double arr[1] = {b};
          return std::exp(dist::gaussian_log_density(p, arr));
        },
        interval.lo, interval.hi, 1e-12);
    worst_clip = std::max(worst_clip, std::fabs(mass_lo + mass_hi + interior - 1.0));
  }
  result.rows.push_back(make_row("clipped_total_mass_err", worst_clip, 1e-10));

  double worst_gauss = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const DiagGaussianParams p({rng.uniform(-1.0, 1.0)}, rng.uniform(0.2, 1.5));
    const double lo = p.mean[0] - 10 * p.sigma, hi = p.mean[0] + 10 * p.sigma;
    const int n = 100000;
    const double step = (hi - lo) / n;
    double total = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double x = lo + i * step;
      const double w = (i == 0 || i == n) ? 0.5 : 1.0;
      const double arr[1] = {x};
      total += w * std::exp(dist::gaussian_log_density(p, arr));
    }
    worst_gauss = std::max(worst_gauss, std::fabs(total * step - 1.0));
  }
  result.rows.push_back(make_row("gaussian_grid_mass_err", worst_gauss, 1e-6));

  finish(result);
  return result;
}

CheckSuiteResult run_polar_suite() {
  CheckSuiteResult result;
  result.suite = "polar";
  RandomStream rng(0x90a1);
  double worst = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + static_cast<int>(rng.uniform_index(2));
    std::vector<double> mean(static_cast<size_t>(d));
    for (auto& c : mean) c = rng.uniform(-1.5, 1.5);
    const double sigma = rng.uniform(0.2, 1.0);
    const DiagGaussianParams params(mean, sigma);
    const auto a = dist::gaussian_sample(params, rng);
    const double radius = std::sqrt(dist::squared_norm(a));
    const UnitVector x = UnitVector::normalized(a);

    const auto gs = dist::gaussian_score(params, a);
    const auto as = dist::angular_score(params, x);
    std::vector<double> analytic(static_cast<size_t>(d) + 1);
    for (int j = 0; j < d; ++j) {
      analytic[static_cast<size_t>(j)] = gs.d_mean[static_cast<size_t>(j)] - as.d_mean[static_cast<size_t>(j)];
    }
    analytic[static_cast<size_t>(d)] = gs.d_sigma - as.d_sigma;

    const auto radial_log = [&](std::span<const double> t) {
      const DiagGaussianParams q = unflatten(t);
      std::vector<double> point(x.coords());
      for (auto& c : point) c *= radius;
      const double z = math::integrate_adaptive(
          [&](double r) {
            if (r <= 0.0) return 0.0;
            std::vector<double> p(x.coords());
            for (auto& c : p) c *= r;
            return std::exp((d - 1) * std::log(r) + dist::gaussian_log_density(q, p));
          },
          0.0, dist::squared_norm(q.mean) + 20.0, 1e-12);
      return (d - 1) * std::log(radius) + dist::gaussian_log_density(q, point) -
             std::log(z);
    };
    std::vector<double> theta = mean;
    theta.push_back(sigma);
    worst = std::max(worst, est::finite_diff_check(
        radial_log, [&](std::span<const double>) { return analytic; }, theta,
        1e-5));
  }
  result.rows.push_back(make_row("radial_conditional_score_fd", worst, 1e-5));
  finish(result);
  return result;
}

CheckSuiteResult run_capg_suite() {
  CheckSuiteResult result;
  result.suite = "capg";
  train::ClippedScalarPolicy policy(0.8, 0.6, ClipInterval(-1.0, 1.0));
  const std::vector<std::vector<double>> states{{0.0}};
  const est::QFunction q = [](std::span<const double>,
                              std::span<const double> b) {
    return 1.0 - (b[0] - 0.25) * (b[0] - 0.25);
  };
  RandomStream rng(0xca96);
  const est::VarianceReport report = est::measure_variance(
      policy, states, q, train::EstimatorKind::kClipped, 100000, rng);
  result.rows.push_back(make_row("gap_nonnegative_sigmas",
                                 -report.gap / report.mc_stderr_gap, 3.0));
  result.rows.push_back(
      make_row("gap_identity_residual_sigmas",
               std::fabs(report.gap_identity_residual) /
                   report.gap_identity_stderr,
               4.0));
  finish(result);
  return result;
}

std::vector<CheckSuiteResult> run_check_suites(
    const std::vector<std::string>& names) {
  std::vector<CheckSuiteResult> results;
  for (const std::string& name : names) {
    if (name == "mfun") {
      results.push_back(run_mfun_suite());
    } else if (name == "grads") {
      results.push_back(run_grads_suite());
    } else if (name == "normalization") {
      results.push_back(run_normalization_suite());
    } else if (name == "polar") {
      results.push_back(run_polar_suite());
    } else if (name == "capg") {
      results.push_back(run_capg_suite());
    } else {
      throw std::invalid_argument("unknown check suite: " + name);
    }
  }
  return results;
}

}  // namespace mpg::cli
