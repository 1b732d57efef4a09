#include <cmath>
#include <numeric>
#include <stdexcept>

#include "doctest.h"
#include "mpg/common/random.hpp"
#include "mpg/dist/angular.hpp"
#include "mpg/dist/clipped.hpp"
#include "mpg/dist/gaussian.hpp"
#include "mpg/dist/wrapped_angle.hpp"
#include "mpg/est/finite_diff.hpp"
#include "mpg/math/quadrature.hpp"
#include "mpg/math/special.hpp"

using namespace mpg;
using namespace mpg::dist;

namespace {

constexpr double kPi = 3.14159265358979323846;

// params flattened as [mean..., sigma] for finite-difference checks
DiagGaussianParams unflatten(std::span<const double> theta) {
  std::vector<double> mean(theta.begin(), theta.end() - 1);
  return DiagGaussianParams(std::move(mean), theta.back());
}

std::vector<double> flatten_score(const ScoreVector& s) {
  std::vector<double> out = s.d_mean;
  out.push_back(s.d_sigma);
  return out;
}

}  // namespace

TEST_CASE("DiagGaussianParams validation") {
  CHECK_THROWS_AS(DiagGaussianParams({0.0}, 1e-5), std::invalid_argument);
  CHECK_THROWS_AS(DiagGaussianParams({}, 1.0), std::invalid_argument);
  CHECK_NOTHROW(DiagGaussianParams({0.0}, 1e-4));
}

TEST_CASE("gaussian_sample moments") {
  const DiagGaussianParams params({0.3, -0.7}, 0.5);
  RandomStream rng(101);
  const int n = 1000000;
  std::vector<double> mean_acc(2, 0.0), sq_acc(2, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto a = gaussian_sample(params, rng);
    for (int j = 0; j < 2; ++j) {
      mean_acc[j] += a[j];
      const double c = a[j] - params.mean[j];
      sq_acc[j] += c * c;
    }
  }
  for (int j = 0; j < 2; ++j) {
    const double mean = mean_acc[j] / n;
    const double var = sq_acc[j] / n;
    CHECK(std::fabs(mean - params.mean[j]) < 4.0 * params.sigma / 1e3);
    CHECK(std::fabs(var - 0.25) < 0.02 * 0.25);
  }
}

TEST_CASE("gaussian_sample degenerate scale limit") {
  const double eps = DiagGaussianParams::kSigmaFloor;
  const DiagGaussianParams params({1.0, 2.0}, eps);
  RandomStream rng(7);
  for (int i = 0; i < 100; ++i) {
    const auto a = gaussian_sample(params, rng);
    CHECK(std::fabs(a[0] - 1.0) < 10.0 * eps);
    CHECK(std::fabs(a[1] - 2.0) < 10.0 * eps);
  }
}

TEST_CASE("gaussian_log_density anchors") {
  const DiagGaussianParams params({0.0, 0.0}, 1.0);
  const std::vector<double> origin{0.0, 0.0};
  const std::vector<double> e1{1.0, 0.0};
  CHECK(gaussian_log_density(params, origin) ==
        doctest::Approx(-1.8378770664093455).epsilon(1e-12));
  CHECK(gaussian_log_density(params, e1) ==
        doctest::Approx(-2.3378770664093455).epsilon(1e-12));
  CHECK_THROWS_AS(gaussian_log_density(params, std::vector<double>{1.0}),
                  std::invalid_argument);
}

TEST_CASE("gaussian density integrates to 1 on a 1-D grid") {
  const DiagGaussianParams params({0.4}, 0.7);
  const double lo = 0.4 - 10 * 0.7, hi = 0.4 + 10 * 0.7;
  const int n = 100000;
  const double h = (hi - lo) / n;
  double total = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + i * h;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    const double a[1] = {x};
    total += w * std::exp(gaussian_log_density(params, a));
  }
  total *= h;
  CHECK(std::fabs(total - 1.0) < 1e-6);
}

TEST_CASE("gaussian_score closed form and mean-zero identity") {
  const DiagGaussianParams params({0.0, 0.0}, 1.0);
  const std::vector<double> e1{1.0, 0.0};
  const auto s = gaussian_score(params, e1);
  CHECK(s.d_mean[0] == doctest::Approx(1.0));
  CHECK(s.d_mean[1] == doctest::Approx(0.0));
  CHECK(s.d_sigma == doctest::Approx(-1.0));

  const auto at_mean = gaussian_score(params, std::vector<double>{0.0, 0.0});
  CHECK(at_mean.d_mean[0] == 0.0);
  CHECK(at_mean.d_mean[1] == 0.0);

  // E[score] = 0 under its own samples
  const DiagGaussianParams p2({0.5, -1.2}, 0.3);
  RandomStream rng(42);
  const int n = 100000;
  std::vector<double> acc(3, 0.0), sq(3, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto a = gaussian_sample(p2, rng);
    const auto sc = flatten_score(gaussian_score(p2, a));
    for (int j = 0; j < 3; ++j) {
      acc[j] += sc[j];
      sq[j] += sc[j] * sc[j];
    }
  }
  for (int j = 0; j < 3; ++j) {
    const double mean = acc[j] / n;
    const double stderr_j =
        std::sqrt((sq[j] / n - mean * mean) / n);
    CHECK(std::fabs(mean) < 4.0 * stderr_j);
  }
}

TEST_CASE("angular_sample is on the sphere and concentrates") {
  const DiagGaussianParams conc({10.0, 0.0}, 0.1);
  RandomStream rng(5);
  std::vector<double> dir_acc(2, 0.0);
  for (int i = 0; i < 20000; ++i) {
    const auto x = angular_sample(conc, rng);
    const double norm = std::sqrt(squared_norm(x.coords()));
    CHECK(std::fabs(norm - 1.0) <= 1e-12);
    dir_acc[0] += x[0];
    dir_acc[1] += x[1];
  }
  const double mean_angle = std::atan2(dir_acc[1], dir_acc[0]);
  CHECK(std::fabs(mean_angle) < 0.01);
}

TEST_CASE("angular_sample uniform when mean is zero (chi-squared)") {
  const DiagGaussianParams params({0.0, 0.0}, 1.0);
  RandomStream rng(9);
  const int bins = 36, n = 100000;
  std::vector<int> counts(bins, 0);
  for (int i = 0; i < n; ++i) {
    const auto x = angular_sample(params, rng);
    const double theta = std::atan2(x[1], x[0]) + kPi;
    int b = static_cast<int>(theta / (2.0 * kPi) * bins);
    if (b == bins) b = bins - 1;
    counts[b]++;
  }
  const double expected = static_cast<double>(n) / bins;
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 35 dof, p = 0.001 critical value
  CHECK(chi2 < 66.61882884370108);
}

TEST_CASE("angular ops require d >= 2") {
  const DiagGaussianParams scalar({0.5}, 0.3);
  RandomStream rng(1);
  CHECK_THROWS_AS(angular_sample(scalar, rng), std::invalid_argument);
}

TEST_CASE("angular_log_density anchors") {
  const DiagGaussianParams uniform({0.0, 0.0}, 1.0);
  const UnitVector x(std::vector<double>{0.6, 0.8});
  CHECK(angular_log_density(uniform, x) ==
        doctest::Approx(-1.8378770664093455).epsilon(1e-12));  // log(1/(2*pi))

  const DiagGaussianParams p({1.0, 0.0}, 1.0);
  const UnitVector e1(std::vector<double>{1.0, 0.0});
  CHECK(angular_log_density(p, e1) ==
        doctest::Approx(-0.8389123143553658).epsilon(1e-12));
}

TEST_CASE("angular density normalizes on the circle") {
  RandomStream rng(77);
  const int nodes = 10000;
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<double> m{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    const double sigma = rng.uniform(0.1, 1.0);
    const DiagGaussianParams params(m, sigma);
    double total = 0.0;
    for (int i = 0; i < nodes; ++i) {
      const double theta = 2.0 * kPi * i / nodes;
      const UnitVector x(std::vector<double>{std::cos(theta), std::sin(theta)});
      total += std::exp(angular_log_density(params, x));
    }
    total *= 2.0 * kPi / nodes;
    CHECK(std::fabs(total - 1.0) < 1e-6);
  }
}

TEST_CASE("angular_score anchors") {
  const DiagGaussianParams params({0.0, 0.0}, 1.0);
  const UnitVector e1(std::vector<double>{1.0, 0.0});
  const auto s = angular_score(params, e1);
  CHECK(s.d_mean[0] == doctest::Approx(1.2533141373155003).epsilon(1e-12));
  CHECK(s.d_mean[1] == doctest::Approx(0.0));

  // x orthogonal to the mean: the component along m comes only from -m/s^2
  const DiagGaussianParams p({0.0, 0.8}, 0.5);
  const auto s2 = angular_score(p, e1);
  CHECK(s2.d_mean[1] == doctest::Approx(-0.8 / 0.25).epsilon(1e-12));
}

TEST_CASE("angular score has zero mean under its own samples") {
  const DiagGaussianParams params({0.7, -0.2, 0.4}, 0.6);
  RandomStream rng(13);
  const int n = 100000;
  std::vector<double> acc(4, 0.0), sq(4, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto x = angular_sample(params, rng);
    const auto sc = flatten_score(angular_score(params, x));
    for (int j = 0; j < 4; ++j) {
      acc[j] += sc[j];
      sq[j] += sc[j] * sc[j];
    }
  }
  for (int j = 0; j < 4; ++j) {
    const double mean = acc[j] / n;
    const double stderr_j = std::sqrt((sq[j] / n - mean * mean) / n);
    CHECK(std::fabs(mean) < 4.0 * stderr_j);
  }
}

TEST_CASE("clipped_log_density anchors and total mass") {
  const DiagGaussianParams params({0.0}, 1.0);
  const ClipInterval iv(-1.0, 1.0);
  CHECK(clipped_log_density(params, iv, -1.0) ==
        doctest::Approx(-1.8410216450092635).epsilon(1e-12));
  CHECK(clipped_log_density(params, iv, 0.0) ==
        doctest::Approx(-0.9189385332046727).epsilon(1e-12));
  CHECK_THROWS_AS(clipped_log_density(params, iv, 1.5), std::out_of_range);

  // point masses + interior quadrature partition unity
  RandomStream rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const DiagGaussianParams p({rng.uniform(-1.5, 1.5)}, rng.uniform(0.2, 1.5));
    const double lo = rng.uniform(-2.0, 0.0);
    const ClipInterval span(lo, lo + rng.uniform(0.5, 3.0));
    const double mass_lo = std::exp(clipped_log_density(p, span, span.lo));
    const double mass_hi = std::exp(clipped_log_density(p, span, span.hi));
    // interior density coincides with the parent Gaussian
    const double mid = 0.5 * (span.lo + span.hi);
    const double probe[1] = {mid};
    CHECK(clipped_log_density(p, span, mid) ==
          doctest::Approx(gaussian_log_density(p, probe)).epsilon(1e-14));
    const double interior = mpg::math::integrate_adaptive(
        [&](double b) {
          const double arr[1] = {b};
          return std::exp(gaussian_log_density(p, arr));
        },
        span.lo, span.hi, 1e-12);
    CHECK(std::fabs(mass_lo + mass_hi + interior - 1.0) < 1e-10);
  }
}

TEST_CASE("clipped_score anchors and pushforward mean-zero identity") {
  const DiagGaussianParams params({0.0}, 1.0);
  const ClipInterval iv(-1.0, 1.0);
  const auto hi = clipped_score(params, iv, 1.0);
  CHECK(hi.d_mean[0] == doctest::Approx(1.5251352761609812).epsilon(1e-12));
  const auto mid = clipped_score(params, iv, 0.0);
  CHECK(mid.d_mean[0] == doctest::Approx(0.0));

  const DiagGaussianParams p({0.4}, 0.8);
  RandomStream rng(23);
  const int n = 100000;
  std::vector<double> acc(2, 0.0), sq(2, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto a = gaussian_sample(p, rng);
    const double b = std::min(std::max(a[0], iv.lo), iv.hi);
    const auto sc = flatten_score(clipped_score(p, iv, b));
    for (int j = 0; j < 2; ++j) {
      acc[j] += sc[j];
      sq[j] += sc[j] * sc[j];
    }
  }
  for (int j = 0; j < 2; ++j) {
    const double mean = acc[j] / n;
    const double stderr_j = std::sqrt((sq[j] / n - mean * mean) / n);
    CHECK(std::fabs(mean) < 4.0 * stderr_j);
  }
}

TEST_CASE("wrapped_angle_score") {
  const auto zero = wrapped_angle_score(0.7, 0.2, 0.7);
  CHECK(zero.d_mean[0] == doctest::Approx(0.0));
  const auto s = wrapped_angle_score(0.0, 0.1, 0.1);
  CHECK(s.d_mean[0] == doctest::Approx(10.0).epsilon(1e-12));

  RandomStream rng(3);
  const int n = 100000;
  std::vector<double> acc(2, 0.0), sq(2, 0.0);
  const double mu = 0.4, sg = 0.3;
  for (int i = 0; i < n; ++i) {
    const double a = mu + sg * rng.normal();
    const auto sc = flatten_score(wrapped_angle_score(mu, sg, a));
    for (int j = 0; j < 2; ++j) {
      acc[j] += sc[j];
      sq[j] += sc[j] * sc[j];
    }
  }
  for (int j = 0; j < 2; ++j) {
    const double mean = acc[j] / n;
    const double stderr_j = std::sqrt((sq[j] / n - mean * mean) / n);
    CHECK(std::fabs(mean) < 4.0 * stderr_j);
  }
}

TEST_CASE("all analytic scores match central finite differences") {
  RandomStream rng(911);
  const double h = 1e-5;
  int gauss_cases = 0, ang_cases = 0, clip_int = 0, clip_bnd = 0, wrap_cases = 0;
  while (gauss_cases < 100 || ang_cases < 100 || clip_int < 100 ||
         clip_bnd < 100 || wrap_cases < 100) {
    const double sigma = rng.uniform(0.05, 1.0);
    const int d = 2 + static_cast<int>(rng.uniform_index(2));
    std::vector<double> mean(d);
    for (auto& c : mean) c = rng.uniform(-2.0, 2.0);

    if (gauss_cases < 100) {
      DiagGaussianParams p(mean, sigma);
      RandomStream local(rng.engine()());
      const auto a = gaussian_sample(p, local);
      std::vector<double> theta = mean;
      theta.push_back(sigma);
      const double err = mpg::est::finite_diff_check(
          [&](std::span<const double> t) {
            return gaussian_log_density(unflatten(t), a);
          },
          [&](std::span<const double> t) {
            return flatten_score(gaussian_score(unflatten(t), a));
          },
          theta, h);
      CHECK(err <= 1e-5);
      ++gauss_cases;
    }
    if (ang_cases < 100) {
      DiagGaussianParams p(mean, sigma);
      RandomStream local(rng.engine()());
      const auto x = angular_sample(p, local);
      std::vector<double> theta = mean;
      theta.push_back(sigma);
      const double err = mpg::est::finite_diff_check(
          [&](std::span<const double> t) {
            return angular_log_density(unflatten(t), x);
          },
          [&](std::span<const double> t) {
            return flatten_score(angular_score(unflatten(t), x));
          },
          theta, h);
      CHECK(err <= 1e-5);
      ++ang_cases;
    }
    const std::vector<double> mean1{rng.uniform(-1.5, 1.5)};
    const double lo = rng.uniform(-2.0, 0.0);
    const ClipInterval iv(lo, lo + rng.uniform(0.5, 3.0));
    DiagGaussianParams p1(mean1, sigma);
    RandomStream local(rng.engine()());
    const auto draw = gaussian_sample(p1, local);
    const double b = std::min(std::max(draw[0], iv.lo), iv.hi);
    const bool boundary = (b == iv.lo || b == iv.hi);
    if ((boundary && clip_bnd < 100) || (!boundary && clip_int < 100)) {
      std::vector<double> theta = mean1;
      theta.push_back(sigma);
      const double err = mpg::est::finite_diff_check(
          [&](std::span<const double> t) {
            return clipped_log_density(unflatten(t), iv, b);
          },
          [&](std::span<const double> t) {
            return flatten_score(clipped_score(unflatten(t), iv, b));
          },
          theta, h);
      CHECK(err <= 1e-5);
      (boundary ? clip_bnd : clip_int)++;
    }
    if (wrap_cases < 100) {
      const double mu = rng.uniform(-3.0, 3.0);
      const double a = mu + sigma * rng.normal();
      const std::vector<double> theta{mu, sigma};
      const double err = mpg::est::finite_diff_check(
          [&](std::span<const double> t) {
            return wrapped_angle_log_density(t[0], t[1], a);
          },
          [&](std::span<const double> t) {
            return flatten_score(wrapped_angle_score(t[0], t[1], a));
          },
          theta, h);
      CHECK(err <= 1e-5);
      ++wrap_cases;
    }
  }
}

TEST_CASE("clipped boundary score stays finite in the deep tail") {
  // mean far from the interval: one tail mass is ~1e-90 yet the score is
  // a clean inverse-Mills ratio
  const DiagGaussianParams p({10.0}, 0.5);
  const ClipInterval iv(-1.0, 1.0);
  const auto s = clipped_score(p, iv, -1.0);  // z = -22
  CHECK(std::isfinite(s.d_mean[0]));
  CHECK(std::isfinite(s.d_sigma));
  CHECK(s.d_mean[0] < 0.0);
  // FD in a transformed spot check: compare against log-density differences
  const double h = 1e-6;
  const DiagGaussianParams pp({10.0 + h}, 0.5);
  const DiagGaussianParams pm({10.0 - h}, 0.5);
  const double fd = (clipped_log_density(pp, iv, -1.0) -
                     clipped_log_density(pm, iv, -1.0)) /
                    (2.0 * h);
  CHECK(fd == doctest::Approx(s.d_mean[0]).epsilon(1e-6));
}

TEST_CASE("polar decomposition: gaussian minus angular score is the radial score") {
  RandomStream rng(555);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + static_cast<int>(rng.uniform_index(2));
    std::vector<double> mean(d);
    for (auto& c : mean) c = rng.uniform(-1.5, 1.5);
    const double sigma = rng.uniform(0.2, 1.0);
    const DiagGaussianParams params(mean, sigma);
    const auto a = gaussian_sample(params, rng);
    const double r = std::sqrt(squared_norm(a));
    const UnitVector x = UnitVector::normalized(a);

    // analytic difference
    const auto gs = gaussian_score(params, a);
    const auto as = angular_score(params, x);
    std::vector<double> analytic(static_cast<size_t>(d) + 1);
    for (int j = 0; j < d; ++j) analytic[j] = gs.d_mean[j] - as.d_mean[j];
    analytic[d] = gs.d_sigma - as.d_sigma;

    // oracle: finite differences of the log radial conditional
    //   log f(r|x) = (d-1) log r + log N(r x; m, s^2 I) - log Z(theta),
    // with Z from quadrature. The Jacobian term has no theta-gradient.
    const auto radial_log = [&](std::span<const double> t) {
      const DiagGaussianParams q = unflatten(t);
      std::vector<double> point(x.coords());
      for (auto& c : point) c *= r;
      const double z = mpg::math::integrate_adaptive(
          [&](double radius) {
            if (radius <= 0.0) return 0.0;
            std::vector<double> p(x.coords());
            for (auto& c : p) c *= radius;
            return std::exp((d - 1) * std::log(radius) +
                            gaussian_log_density(q, p));
          },
          0.0, squared_norm(q.mean) + 20.0, 1e-12);
      return (d - 1) * std::log(r) + gaussian_log_density(q, point) -
             std::log(z);
    };
    std::vector<double> theta = mean;
    theta.push_back(sigma);
    const double err = mpg::est::finite_diff_check(
        radial_log,
        [&](std::span<const double>) { return analytic; },
        theta, 1e-5);
    CHECK(err <= 1e-5);
  }
}
