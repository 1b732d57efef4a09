// Acceptance suite: one line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mpg/cli/checks.hpp"
#include "mpg/common/random.hpp"
#include "mpg/env/platform2d.hpp"
#include "mpg/env/toy_parametrized.hpp"
#include "mpg/est/variance.hpp"
#include "mpg/train/policy.hpp"
#include "mpg/train/trainer.hpp"

using namespace mpg;
using mpg::train::EstimatorKind;

namespace {

int g_failures = 0;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void report(int criterion, const std::string& label, bool pass,
            const std::string& detail, double seconds) {
  std::printf("%s criterion %d: %s (%s) [%.1fs]\n", pass ? "PASS" : "FAIL",
              criterion, label.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string format(const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

double rolling_100(std::span<const train::EpisodeRecord> eps) {
  if (eps.size() < 100) return -1e18;
  double total = 0.0;
  for (size_t i = eps.size() - 100; i < eps.size(); ++i) {
    total += eps[i].discounted_return;
  }
  return total / 100.0;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  return (n % 2 == 1) ? values[n / 2]
                      : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// ---------------------------------------------------------------------------

void criterion_1_mfun() {
  Timer timer;
  const cli::CheckSuiteResult suite = cli::run_mfun_suite();
  const double worst = suite.rows[0].observed;
  report(1, "m-function recursion vs quadrature oracle", suite.rows[0].pass,
         format("worst rel err %.3g <= 1e-8 over d in 0..10, alpha in -5..5",
                worst),
         timer.seconds());
}

void criterion_2_normalization() {
  Timer timer;
  const cli::CheckSuiteResult suite = cli::run_normalization_suite();
  report(2, "density normalization", suite.pass,
         format("angular %.3g<=1e-6, clipped %.3g<=1e-10, gaussian %.3g<=1e-6",
                suite.rows[0].observed, suite.rows[1].observed,
                suite.rows[2].observed),
         timer.seconds());
}

void criterion_3_gradients() {
  Timer timer;
  const cli::CheckSuiteResult suite = cli::run_grads_suite();
  double worst = 0.0;
  for (const auto& row : suite.rows) worst = std::max(worst, row.observed);
  report(3, "analytic scores and MLP backward vs finite differences",
         suite.pass, format("worst rel err %.3g <= 1e-5", worst),
         timer.seconds());
}

struct UnbiasedResult {
  double worst_sigmas = 0.0;  // |mean diff| / pooled stderr, worst component
};

UnbiasedResult coupled_unbiasedness(const train::Policy& policy,
                                    const est::QFunction& q, long n,
                                    uint64_t seed) {
  const auto kinds = policy.coupled_kinds();
  const int dim = policy.param_count();
  const std::vector<double> state{0.0};
  RandomStream rng(seed);
  std::vector<double> s1(dim, 0.0), s2(dim, 0.0), v1(dim, 0.0), v2(dim, 0.0);
  for (long i = 0; i < n; ++i) {
    const train::PolicyDraw draw = policy.act(state, rng);
    const double weight = q(state, draw.env_action);
    const auto g1 = policy.score(state, draw, kinds.first);
    const auto g2 = policy.score(state, draw, kinds.second);
    for (int j = 0; j < dim; ++j) {
      const double a = weight * g1[j];
      const double b = weight * g2[j];
      s1[j] += a;
      s2[j] += b;
      v1[j] += a * a;
      v2[j] += b * b;
    }
  }
  UnbiasedResult out;
  for (int j = 0; j < dim; ++j) {
    const double m1 = s1[j] / n, m2 = s2[j] / n;
    const double var1 = v1[j] / n - m1 * m1;
    const double var2 = v2[j] / n - m2 * m2;
    const double pooled = std::sqrt((var1 + var2) / static_cast<double>(n));
    if (pooled > 0.0) {
      out.worst_sigmas = std::max(out.worst_sigmas, std::fabs(m1 - m2) / pooled);
    }
  }
  return out;
}

void criterion_4_unbiasedness() {
  Timer timer;
  const long n = 1000000;
  const est::QFunction q_dir = [](std::span<const double>,
                                  std::span<const double> b) {
    return 1.0 + 0.5 * b[0];
  };
  const est::QFunction q_clip = [](std::span<const double>,
                                   std::span<const double> b) {
    return 1.0 - (b[0] - 0.3) * (b[0] - 0.3);
  };
  const est::QFunction q_toy = [](std::span<const double>,
                                  std::span<const double> b) {
    return 0.5 + 0.25 * b[1] + 0.1 * b[0];
  };

  double worst = 0.0;
  {
    train::IdentityDirectionalPolicy policy({1.0, 0.5}, 0.4);
    worst = std::max(worst, coupled_unbiasedness(policy, q_dir, n, 41).worst_sigmas);
  }
  {
    train::IdentityDirectionalPolicy policy({0.3, -0.2, 0.8}, 0.6);
    worst = std::max(worst, coupled_unbiasedness(policy, q_dir, n, 42).worst_sigmas);
  }
  {
    train::ClippedScalarPolicy policy(0.8, 0.7, dist::ClipInterval(-1.0, 1.0));
    worst = std::max(worst, coupled_unbiasedness(policy, q_clip, n, 43).worst_sigmas);
  }
  {
    train::ParametrizedToyPolicy policy(
        nn::MlpSpec::make(1, 5, 1, 8, nn::Activation::kTanh, 77), 0.4, 0.5);
    worst = std::max(worst, coupled_unbiasedness(policy, q_toy, n, 44).worst_sigmas);
  }
  report(4, "coupled estimators agree in expectation (angular d=2,3; clipped; parametrized)",
         worst <= 4.0,
         format("worst |mean diff| = %.2f pooled stderrs <= 4 at N=1e6", worst),
         timer.seconds());
}

void criterion_5_variance_reduction() {
  Timer timer;
  bool pass = true;
  std::string detail;

  // pinned configuration: sigma = 0.1, m = (1,0), critic-shaped q
  {
    train::IdentityDirectionalPolicy policy({1.0, 0.0}, 0.1);
    const std::vector<std::vector<double>> states{{0.0}};
    const std::vector<double> s0{-1.0, -1.0};
    const est::QFunction q = [&s0](std::span<const double>,
                                   std::span<const double> b) {
      // one-step advantage under the ideal potential critic at the start state
      const std::vector<double> next{s0[0] + 0.1 * b[0], s0[1] + 0.1 * b[1]};
      return env::Platform2D::potential(s0) - env::Platform2D::potential(next);
    };
    RandomStream rng(51);
    const est::VarianceReport rep = est::measure_variance(
        policy, states, q, EstimatorKind::kAngular, 100000, rng);
    const bool strict = rep.gap > 3.0 * rep.mc_stderr_gap;
    const bool identity =
        std::fabs(rep.gap_identity_residual) <= 4.0 * rep.gap_identity_stderr;
    pass = pass && strict && identity;
    detail += format("pinned gap=%.3g (%.0f sigmas), radial identity %.2f<=4",
                     rep.gap, rep.gap / rep.mc_stderr_gap,
                     std::fabs(rep.gap_identity_residual) /
                         rep.gap_identity_stderr);
  }
  // further configurations: nonnegativity and the gap identities
  {
    train::IdentityDirectionalPolicy policy({0.3, -0.2, 0.8}, 0.6);
    const std::vector<std::vector<double>> states{{0.0}};
    const est::QFunction q = [](std::span<const double>,
                                std::span<const double> b) {
      return 1.0 + 0.5 * b[0] - 0.25 * b[1];
    };
    RandomStream rng(52);
    const est::VarianceReport rep = est::measure_variance(
        policy, states, q, EstimatorKind::kAngular, 100000, rng);
    pass = pass && rep.gap >= -3.0 * rep.mc_stderr_gap &&
           std::fabs(rep.gap_identity_residual) <= 4.0 * rep.gap_identity_stderr;
  }
  {
    train::DirectionalGaussianPolicy policy(
        nn::MlpSpec::make(2, 2, 2, 16, nn::Activation::kTanh, 5), 0.1);
    const std::vector<std::vector<double>> states{
        {-1.0, -1.0}, {0.0, 0.5}, {0.7, -0.3}, {1.2, 1.0}};
    const est::QFunction q = [](std::span<const double> s,
                                std::span<const double> b) {
      return (1.0 - s[0]) * b[0] + (1.0 - s[1]) * b[1];
    };
    RandomStream rng(53);
    const est::VarianceReport rep = est::measure_variance(
        policy, states, q, EstimatorKind::kAngular, 60000, rng);
    pass = pass && rep.gap >= -3.0 * rep.mc_stderr_gap &&
           std::fabs(rep.gap_identity_residual) <= 4.0 * rep.gap_identity_stderr;
  }
  {
    // CAPG analog on the clipped-reward bandit
    train::ClippedScalarPolicy policy(0.8, 0.6, dist::ClipInterval(-1.0, 1.0));
    const std::vector<std::vector<double>> states{{0.0}};
    const est::QFunction q = [](std::span<const double>,
                                std::span<const double> b) {
      return 1.0 - (b[0] - 0.25) * (b[0] - 0.25);
    };
    RandomStream rng(54);
    const est::VarianceReport rep = est::measure_variance(
        policy, states, q, EstimatorKind::kClipped, 100000, rng);
    const bool ok = rep.gap >= -3.0 * rep.mc_stderr_gap &&
                    std::fabs(rep.gap_identity_residual) <=
                        4.0 * rep.gap_identity_stderr;
    pass = pass && ok;
    detail += format("; capg identity %.2f<=4",
                     std::fabs(rep.gap_identity_residual) /
                         rep.gap_identity_stderr);
  }
  report(5, "variance reduction and gap identities", pass, detail,
         timer.seconds());
}

void criterion_6_variance_ratio() {
  Timer timer;
  train::TrainConfig cfg;
  cfg.estimator = EstimatorKind::kAngular;
  cfg.seed = 1;
  const train::EnvFactory factory = [] {
    return std::make_unique<env::Platform2D>();
  };

  est::RolloutVarianceOptions options;
  options.gamma = cfg.gamma;
  options.rollout_len = cfg.rollout_len;
  options.n = 100000;

  // init-model protocol: fresh actor and critic
  double init_ratio = 0.0;
  {
    const auto actor = train::make_policy(cfg, 2, 2);
    const train::Critic critic = train::make_critic(cfg, 2);
    RandomStream rng(61);
    const est::VarianceReport rep =
        est::measure_rollout_variance(*actor, critic, factory, options, rng);
    init_ratio = rep.var_marginal / rep.var_standard;
  }

  // trained-model protocol: converged run
  double trained_ratio = 0.0;
  {
    train::TrainConfig tcfg = cfg;
    tcfg.episodes = 20000;
    const double optimum =
        env::Platform2D::optimal_discounted_return({}, tcfg.gamma);
    tcfg.stop_condition = [&](std::span<const train::EpisodeRecord> eps) {
      return eps.size() >= 3000 && rolling_100(eps) >= 0.95 * optimum;
    };
    const train::TrainResult result = train::run_training(tcfg, factory);
    RandomStream rng(62);
    const est::VarianceReport rep = est::measure_rollout_variance(
        *result.actor, result.critic, factory, options, rng);
    trained_ratio = rep.var_marginal / rep.var_standard;
  }

  const bool pass = init_ratio >= 0.3 && init_ratio <= 0.7 &&
                    trained_ratio >= 0.3 && trained_ratio <= 0.7;
  report(6, "marginal/standard variance ratio on the navigation task", pass,
         format("init %.3f, trained %.3f, both in [0.3, 0.7]", init_ratio,
                trained_ratio),
         timer.seconds());
}

void criterion_7_learning_curves() {
  Timer timer;
  const int n_seeds = 8;
  const long episode_cap = 20000;
  const double optimum = env::Platform2D::optimal_discounted_return({}, 0.99);
  const train::EnvFactory factory = [] {
    return std::make_unique<env::Platform2D>();
  };

  struct Outcome {
    double final100 = 0.0;
    long to90 = episode_cap + 1;
    long to95 = episode_cap + 1;
  };
  const auto run_one = [&](EstimatorKind kind, uint64_t seed) {
    train::TrainConfig cfg;
    cfg.estimator = kind;
    cfg.seed = seed;
    cfg.episodes = episode_cap;
    Outcome out;
    cfg.stop_condition = [&](std::span<const train::EpisodeRecord> eps) {
      const double rolling = rolling_100(eps);
      if (out.to90 > episode_cap && rolling >= 0.90 * optimum) {
        out.to90 = static_cast<long>(eps.size());
      }
      if (out.to95 > episode_cap && rolling >= 0.95 * optimum) {
        out.to95 = static_cast<long>(eps.size());
        return true;  // converged, stop early
      }
      return false;
    };
    const train::TrainResult result = train::run_training(cfg, factory);
    out.final100 = rolling_100(result.episodes);
    return out;
  };

  std::vector<double> apg_final, apg_to90, std_to90;
  for (int seed = 1; seed <= n_seeds; ++seed) {
    const Outcome apg = run_one(EstimatorKind::kAngular, seed);
    const Outcome standard = run_one(EstimatorKind::kStandard, seed);
    apg_final.push_back(apg.final100);
    apg_to90.push_back(static_cast<double>(apg.to90));
    std_to90.push_back(static_cast<double>(standard.to90));
  }

  const double med_final = median(apg_final);
  const double med_apg90 = median(apg_to90);
  const double med_std90 = median(std_to90);
  const bool pass_a = med_final >= 0.95 * optimum;
  const bool pass_b = med_apg90 < med_std90;
  report(7, "learning-curve reproduction over 8 seeds", pass_a && pass_b,
         format("median final-100 %.4f >= %.4f; median episodes to 90%%: "
                "angular %.0f < standard %.0f",
                med_final, 0.95 * optimum, med_apg90, med_std90),
         timer.seconds());
}

void criterion_8_determinism() {
  Timer timer;
  const auto run_csv = [](const std::string& path) {
    train::TrainConfig cfg;
    cfg.estimator = EstimatorKind::kAngular;
    cfg.seed = 21;
    cfg.episodes = 200;
    cfg.workers = 4;
    const train::TrainResult result = train::run_training(
        cfg, [] { return std::make_unique<env::Platform2D>(); });
    train::write_episode_csv(path, "determinism", result.episodes);
  };
  run_csv("/tmp/mpg_acceptance_det_a.csv");
  run_csv("/tmp/mpg_acceptance_det_b.csv");
  const auto slurp = [](const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string a = slurp("/tmp/mpg_acceptance_det_a.csv");
  const std::string b = slurp("/tmp/mpg_acceptance_det_b.csv");
  report(8, "bit-identical CSV with 4 workers", !a.empty() && a == b,
         format("%zu bytes compared", a.size()), timer.seconds());
}

void criterion_9_telescoping() {
  Timer timer;
  env::Platform2D environment;
  RandomStream rng(91);
  double worst = 0.0;
  for (int episode = 0; episode < 1000; ++episode) {
    auto state = environment.reset(0);
    const double phi0 = env::Platform2D::potential(state);
    double total = 0.0;
    env::StepResult result;
    do {
      const double theta = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
      result = environment.step(
          std::vector<double>{std::cos(theta), std::sin(theta)});
      total += result.reward;
    } while (!result.done());
    const double expected = phi0 - env::Platform2D::potential(result.next_state);
    worst = std::max(worst, std::fabs(total - expected));
  }
  report(9, "potential telescoping over 1000 random episodes", worst <= 1e-12,
         format("worst |sum r - (phi0 - phiT)| = %.3g <= 1e-12", worst),
         timer.seconds());
}

}  // namespace

int main() {
  Timer total;
  criterion_1_mfun();
  criterion_2_normalization();
  criterion_3_gradients();
  criterion_4_unbiasedness();
  criterion_5_variance_reduction();
  criterion_6_variance_ratio();
  criterion_7_learning_curves();
  criterion_8_determinism();
  criterion_9_telescoping();
  std::printf("%d/9 criteria passed [%.1fs total]\n", 9 - g_failures,
              total.seconds());
  return g_failures == 0 ? 0 : 1;
}
