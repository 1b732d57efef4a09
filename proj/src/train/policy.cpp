#include "mpg/train/policy.hpp"

#include <cmath>
#include <stdexcept>

#include "mpg/dist/angular.hpp"
#include "mpg/dist/clipped.hpp"
#include "mpg/dist/gaussian.hpp"
#include "mpg/dist/wrapped_angle.hpp"
#include "mpg/est/estimators.hpp"

namespace mpg::train {

using dist::ClipInterval;
using dist::DiagGaussianParams;
using dist::ScoreVector;
using dist::UnitVector;

const char* estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kStandard:
      return "standard";
    case EstimatorKind::kAngular:
      return "angular";
    case EstimatorKind::kClipped:
      return "clipped";
    case EstimatorKind::kWrappedAngle:
      return "wrapped_angle";
    case EstimatorKind::kParametrized:
      return "parametrized";
    case EstimatorKind::kParametrizedMarginal:
      return "parametrized_marginal";
  }
  return "standard";
}

std::optional<EstimatorKind> parse_estimator(const std::string& name) {
  if (name == "standard") return EstimatorKind::kStandard;
  if (name == "angular") return EstimatorKind::kAngular;
  if (name == "clipped") return EstimatorKind::kClipped;
  if (name == "wrapped_angle") return EstimatorKind::kWrappedAngle;
  if (name == "parametrized") return EstimatorKind::kParametrized;
  if (name == "parametrized_marginal") return EstimatorKind::kParametrizedMarginal;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// DirectionalGaussianPolicy

DirectionalGaussianPolicy::DirectionalGaussianPolicy(nn::MlpSpec spec,
                                                     double sigma,
                                                     bool learn_sigma)
    : spec_(std::move(spec)),
      params_(nn::init_params(spec_)),
      fixed_sigma_(sigma),
      learn_sigma_(learn_sigma) {
  if (spec_.output_dim() < 2) {
    throw std::invalid_argument("DirectionalGaussianPolicy: need d >= 2");
  }
  if (!(sigma >= DiagGaussianParams::kSigmaFloor)) {
    throw std::invalid_argument("DirectionalGaussianPolicy: sigma below floor");
  }
  if (learn_sigma_) {
    params_.values.push_back(sigma);
  }
}

int DirectionalGaussianPolicy::param_count() const {
  return static_cast<int>(params_.values.size());
}

double DirectionalGaussianPolicy::sigma() const {
  if (!learn_sigma_) return fixed_sigma_;
  return std::max(params_.values.back(), DiagGaussianParams::kSigmaFloor);
}

std::vector<double> DirectionalGaussianPolicy::mean(
    std::span<const double> state) const {
  if (!learn_sigma_) return nn::forward(spec_, params_, state);
  nn::FlatParams net = params_;
  net.values.pop_back();
  return nn::forward(spec_, net, state);
}

PolicyDraw DirectionalGaussianPolicy::act(std::span<const double> state,
                                          RandomStream& rng) const {
  const DiagGaussianParams p(mean(state), sigma());
  PolicyDraw draw;
  draw.raw = dist::gaussian_sample(p, rng);
  draw.env_action = UnitVector::normalized(draw.raw).coords();
  return draw;
}

std::vector<double> DirectionalGaussianPolicy::score(
    std::span<const double> state, const PolicyDraw& draw,
    EstimatorKind kind) const {
  const DiagGaussianParams p(mean(state), sigma());
  ScoreVector sv;
  switch (kind) {
    case EstimatorKind::kStandard:
      sv = dist::gaussian_score(p, draw.raw);
      break;
    case EstimatorKind::kAngular:
      sv = dist::angular_score(p, UnitVector(draw.env_action));
      break;
    default:
      throw std::invalid_argument(
          "DirectionalGaussianPolicy: unsupported estimator kind");
  }
  nn::FlatParams net = params_;
  if (learn_sigma_) net.values.pop_back();
  std::vector<double> chained =
      nn::backward(spec_, net, state, sv.d_mean).values;
  if (learn_sigma_) chained.push_back(sv.d_sigma);
  return chained;
}

// ---------------------------------------------------------------------------
// WrappedAnglePolicy

WrappedAnglePolicy::WrappedAnglePolicy(nn::MlpSpec spec, double sigma)
    : spec_(std::move(spec)), params_(nn::init_params(spec_)), sigma_(sigma) {
  if (spec_.output_dim() != 1) {
    throw std::invalid_argument("WrappedAnglePolicy: output must be the angle");
  }
  if (!(sigma >= DiagGaussianParams::kSigmaFloor)) {
    throw std::invalid_argument("WrappedAnglePolicy: sigma below floor");
  }
}

PolicyDraw WrappedAnglePolicy::act(std::span<const double> state,
                                   RandomStream& rng) const {
  const double mu = nn::forward(spec_, params_, state)[0];
  const double a = mu + sigma_ * rng.normal();
  PolicyDraw draw;
  draw.raw = {a};
  draw.env_action = {std::cos(a), std::sin(a)};
  return draw;
}

std::vector<double> WrappedAnglePolicy::score(std::span<const double> state,
                                              const PolicyDraw& draw,
                                              EstimatorKind kind) const {
  if (kind != EstimatorKind::kWrappedAngle) {
    throw std::invalid_argument("WrappedAnglePolicy: unsupported estimator kind");
  }
  const double mu = nn::forward(spec_, params_, state)[0];
  const ScoreVector sv = dist::wrapped_angle_score(mu, sigma_, draw.raw[0]);
  return nn::backward(spec_, params_, state, sv.d_mean).values;
}

// ---------------------------------------------------------------------------
// ParametrizedToyPolicy

namespace {
constexpr int kToyLogits = 2;
const std::vector<int> kToyParamDims{2, 1};
}  // namespace

ParametrizedToyPolicy::ParametrizedToyPolicy(nn::MlpSpec spec,
                                             double sigma_move,
                                             double sigma_thrust)
    : spec_(std::move(spec)),
      params_(nn::init_params(spec_)),
      sigma_move_(sigma_move),
      sigma_thrust_(sigma_thrust) {
  if (spec_.output_dim() != kToyLogits + 3) {
    throw std::invalid_argument(
        "ParametrizedToyPolicy: head must be [logits(2), move(2), thrust(1)]");
  }
  if (!(sigma_move_ >= DiagGaussianParams::kSigmaFloor) ||
      !(sigma_thrust_ >= DiagGaussianParams::kSigmaFloor)) {
    throw std::invalid_argument("ParametrizedToyPolicy: sigma below floor");
  }
}

PolicyDraw ParametrizedToyPolicy::act(std::span<const double> state,
                                      RandomStream& rng) const {
  const std::vector<double> head = nn::forward(spec_, params_, state);
  const std::span<const double> logits(head.data(), kToyLogits);
  // Gumbel-free categorical draw from the two-way softmax
  const double z = std::exp(logits[0]) + std::exp(logits[1]);
  const double p0 = std::exp(logits[0]) / z;
  const int k = rng.uniform() < p0 ? 0 : 1;

  PolicyDraw draw;
  if (k == 0) {
    const DiagGaussianParams p({head[2], head[3]}, sigma_move_);
    const std::vector<double> omega = dist::gaussian_sample(p, rng);
    const UnitVector dir = UnitVector::normalized(omega);
    draw.raw = {0.0, omega[0], omega[1]};
    draw.env_action = {0.0, dir[0], dir[1]};
  } else {
    const DiagGaussianParams p({head[4]}, sigma_thrust_);
    const double omega = dist::gaussian_sample(p, rng)[0];
    const double clipped = std::min(std::max(omega, -1.0), 1.0);
    draw.raw = {1.0, omega, 0.0};
    draw.env_action = {1.0, clipped, 0.0};
  }
  return draw;
}

std::vector<double> ParametrizedToyPolicy::score(std::span<const double> state,
                                                 const PolicyDraw& draw,
                                                 EstimatorKind kind) const {
  const bool marginal = kind == EstimatorKind::kParametrizedMarginal;
  if (!marginal && kind != EstimatorKind::kParametrized) {
    throw std::invalid_argument("ParametrizedToyPolicy: unsupported estimator kind");
  }
  const std::vector<double> head = nn::forward(spec_, params_, state);
  const std::span<const double> logits(head.data(), kToyLogits);
  const int k = static_cast<int>(draw.raw[0]);

  ScoreVector sv;
  if (k == 0) {
    const DiagGaussianParams p({head[2], head[3]}, sigma_move_);
    if (marginal) {
      sv = dist::angular_score(p, UnitVector({draw.env_action[1],
                                              draw.env_action[2]}));
    } else {
      sv = dist::gaussian_score(p, std::vector<double>{draw.raw[1], draw.raw[2]});
    }
  } else {
    const DiagGaussianParams p({head[4]}, sigma_thrust_);
    static const ClipInterval interval(-1.0, 1.0);
    if (marginal) {
      sv = dist::clipped_score(p, interval, draw.env_action[1]);
    } else {
      sv = dist::gaussian_score(p, std::vector<double>{draw.raw[1]});
    }
  }
  const std::vector<double> upstream =
      est::parametrized_score(logits, kToyParamDims, k, sv.d_mean);
  return nn::backward(spec_, params_, state, upstream).values;
}

// ---------------------------------------------------------------------------
// IdentityDirectionalPolicy

IdentityDirectionalPolicy::IdentityDirectionalPolicy(std::vector<double> mean,
                                                     double sigma)
    : dim_(static_cast<int>(mean.size())) {
  if (dim_ < 2) {
    throw std::invalid_argument("IdentityDirectionalPolicy: need d >= 2");
  }
  params_.values = std::move(mean);
  params_.values.push_back(sigma);
  params_.offsets = {0, static_cast<int>(params_.values.size())};
  dist_params();  // validates sigma
}

DiagGaussianParams IdentityDirectionalPolicy::dist_params() const {
  std::vector<double> mean(params_.values.begin(), params_.values.end() - 1);
  return DiagGaussianParams(std::move(mean), params_.values.back());
}

PolicyDraw IdentityDirectionalPolicy::act(std::span<const double> /*state*/,
                                          RandomStream& rng) const {
  PolicyDraw draw;
  draw.raw = dist::gaussian_sample(dist_params(), rng);
  draw.env_action = UnitVector::normalized(draw.raw).coords();
  return draw;
}

std::vector<double> IdentityDirectionalPolicy::score(
    std::span<const double> /*state*/, const PolicyDraw& draw,
    EstimatorKind kind) const {
  const DiagGaussianParams p = dist_params();
  ScoreVector sv;
  switch (kind) {
    case EstimatorKind::kStandard:
      sv = dist::gaussian_score(p, draw.raw);
      break;
    case EstimatorKind::kAngular:
      sv = dist::angular_score(p, UnitVector(draw.env_action));
      break;
    default:
      throw std::invalid_argument(
          "IdentityDirectionalPolicy: unsupported estimator kind");
  }
  std::vector<double> out = sv.d_mean;
  out.push_back(sv.d_sigma);
  return out;
}

// ---------------------------------------------------------------------------
// ClippedScalarPolicy

ClippedScalarPolicy::ClippedScalarPolicy(double mean, double sigma,
                                         ClipInterval interval)
    : interval_(interval) {
  params_.values = {mean, sigma};
  params_.offsets = {0, 2};
  DiagGaussianParams({mean}, sigma);  // validates sigma
}

PolicyDraw ClippedScalarPolicy::act(std::span<const double> /*state*/,
                                    RandomStream& rng) const {
  const DiagGaussianParams p({params_.values[0]}, params_.values[1]);
  PolicyDraw draw;
  draw.raw = dist::gaussian_sample(p, rng);
  draw.env_action = {std::min(std::max(draw.raw[0], interval_.lo), interval_.hi)};
  return draw;
}

std::vector<double> ClippedScalarPolicy::score(std::span<const double> /*state*/,
                                               const PolicyDraw& draw,
                                               EstimatorKind kind) const {
  const DiagGaussianParams p({params_.values[0]}, params_.values[1]);
  ScoreVector sv;
  switch (kind) {
    case EstimatorKind::kStandard:
      sv = dist::gaussian_score(p, draw.raw);
      break;
    case EstimatorKind::kClipped:
      sv = dist::clipped_score(p, interval_, draw.env_action[0]);
      break;
    default:
      throw std::invalid_argument("ClippedScalarPolicy: unsupported estimator kind");
  }
  return {sv.d_mean[0], sv.d_sigma};
}

}  // namespace mpg::train
