#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mpg/common/random.hpp"
#include "mpg/dist/types.hpp"
#include "mpg/nn/mlp.hpp"

namespace mpg::train {

/// Which score the actor update uses.
enum class EstimatorKind {
  kStandard,              // score of the sampling distribution
  kAngular,               // marginal score for T(a) = a/||a||
  kClipped,               // marginal score for T = clip(., lo, hi)
  kWrappedAngle,          // 1-D Gaussian over an unwrapped angle
  kParametrized,          // parametrized action space, per-action standard scores
  kParametrizedMarginal,  // parametrized action space, per-action marginal scores
};

const char* estimator_name(EstimatorKind kind);
std::optional<EstimatorKind> parse_estimator(const std::string& name);

/// One sampled action: the raw draw and what the environment executes.
struct PolicyDraw {
  std::vector<double> raw;
  std::vector<double> env_action;
};

/// A stochastic policy with a flat parameter vector and analytic scores
/// chained through whatever function approximator it owns.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual int state_dim() const = 0;
  virtual int param_count() const = 0;
  virtual nn::FlatParams& params() = 0;
  virtual const nn::FlatParams& params() const = 0;

  virtual PolicyDraw act(std::span<const double> state,
                         RandomStream& rng) const = 0;

  /// Gradient of the chosen log-density at the draw with respect to the
  /// policy parameters.
  virtual std::vector<double> score(std::span<const double> state,
                                    const PolicyDraw& draw,
                                    EstimatorKind kind) const = 0;

  /// The (sampling-distribution, marginal) estimator pair this family
  /// supports for coupled variance comparisons.
  virtual std::pair<EstimatorKind, EstimatorKind> coupled_kinds() const = 0;
};

/// Gaussian policy over R^d whose mean comes from an MLP; executed actions
/// are the normalized draws. Supports the standard and the angular score.
/// sigma is fixed unless learn_sigma is set, in which case it is stored as
/// one trailing parameter.
class DirectionalGaussianPolicy final : public Policy {
 public:
  DirectionalGaussianPolicy(nn::MlpSpec spec, double sigma,
                            bool learn_sigma = false);

  int state_dim() const override { return spec_.input_dim(); }
  int param_count() const override;
  nn::FlatParams& params() override { return params_; }
  const nn::FlatParams& params() const override { return params_; }

  PolicyDraw act(std::span<const double> state, RandomStream& rng) const override;
  std::vector<double> score(std::span<const double> state,
                            const PolicyDraw& draw,
                            EstimatorKind kind) const override;
  std::pair<EstimatorKind, EstimatorKind> coupled_kinds() const override {
    return {EstimatorKind::kStandard, EstimatorKind::kAngular};
  }

  std::vector<double> mean(std::span<const double> state) const;
  double sigma() const;
  const nn::MlpSpec& spec() const { return spec_; }

 private:
  nn::MlpSpec spec_;
  nn::FlatParams params_;
  double fixed_sigma_;
  bool learn_sigma_;
};

/// Baseline that models the angle of a planar direction with a 1-D
/// Gaussian; the executed action is (cos a, sin a).
class WrappedAnglePolicy final : public Policy {
 public:
  WrappedAnglePolicy(nn::MlpSpec spec, double sigma);

  int state_dim() const override { return spec_.input_dim(); }
  int param_count() const override { return spec_.param_count(); }
  nn::FlatParams& params() override { return params_; }
  const nn::FlatParams& params() const override { return params_; }

  PolicyDraw act(std::span<const double> state, RandomStream& rng) const override;
  std::vector<double> score(std::span<const double> state,
                            const PolicyDraw& draw,
                            EstimatorKind kind) const override;
  std::pair<EstimatorKind, EstimatorKind> coupled_kinds() const override {
    return {EstimatorKind::kWrappedAngle, EstimatorKind::kWrappedAngle};
  }

  const nn::MlpSpec& spec() const { return spec_; }
  double sigma() const { return sigma_; }

 private:
  nn::MlpSpec spec_;
  nn::FlatParams params_;
  double sigma_;
};

/// Policy over the two-action parametrized space of ToyParametrized: one
/// MLP head produces [logits(2) | move mean(2) | thrust mean(1)]. The move
/// parameter is executed normalized, the thrust parameter clipped to
/// [-1, 1]. Scores follow the parametrized-action layout of
/// est::parametrized_score chained through the network.
class ParametrizedToyPolicy final : public Policy {
 public:
  ParametrizedToyPolicy(nn::MlpSpec spec, double sigma_move,
                        double sigma_thrust);

  int state_dim() const override { return spec_.input_dim(); }
  int param_count() const override { return spec_.param_count(); }
  nn::FlatParams& params() override { return params_; }
  const nn::FlatParams& params() const override { return params_; }

  PolicyDraw act(std::span<const double> state, RandomStream& rng) const override;
  std::vector<double> score(std::span<const double> state,
                            const PolicyDraw& draw,
                            EstimatorKind kind) const override;
  std::pair<EstimatorKind, EstimatorKind> coupled_kinds() const override {
    return {EstimatorKind::kParametrized, EstimatorKind::kParametrizedMarginal};
  }

 private:
  nn::MlpSpec spec_;  // output layout: [logit0 logit1 | move m0 m1 | thrust m]
  nn::FlatParams params_;
  double sigma_move_;
  double sigma_thrust_;
};

/// Direct-parameter Gaussian over R^d: theta = [mean..., sigma]. The
/// executed action is the normalized draw. The flat chain is the identity,
/// so scores are exactly the distribution scores.
class IdentityDirectionalPolicy final : public Policy {
 public:
  IdentityDirectionalPolicy(std::vector<double> mean, double sigma);

  int state_dim() const override { return 1; }  // bandit-style dummy state
  int param_count() const override { return static_cast<int>(params_.values.size()); }
  nn::FlatParams& params() override { return params_; }
  const nn::FlatParams& params() const override { return params_; }

  PolicyDraw act(std::span<const double> state, RandomStream& rng) const override;
  std::vector<double> score(std::span<const double> state,
                            const PolicyDraw& draw,
                            EstimatorKind kind) const override;
  std::pair<EstimatorKind, EstimatorKind> coupled_kinds() const override {
    return {EstimatorKind::kStandard, EstimatorKind::kAngular};
  }

 private:
  dist::DiagGaussianParams dist_params() const;
  nn::FlatParams params_;  // [mean..., sigma]
  int dim_;
};

/// Direct-parameter scalar Gaussian clipped to an interval: theta =
/// [mean, sigma]. Supports the unclipped (standard) and clipped (marginal)
/// scores.
class ClippedScalarPolicy final : public Policy {
 public:
  ClippedScalarPolicy(double mean, double sigma, dist::ClipInterval interval);

  int state_dim() const override { return 1; }
  int param_count() const override { return 2; }
  nn::FlatParams& params() override { return params_; }
  const nn::FlatParams& params() const override { return params_; }

  PolicyDraw act(std::span<const double> state, RandomStream& rng) const override;
  std::vector<double> score(std::span<const double> state,
                            const PolicyDraw& draw,
                            EstimatorKind kind) const override;
  std::pair<EstimatorKind, EstimatorKind> coupled_kinds() const override {
    return {EstimatorKind::kStandard, EstimatorKind::kClipped};
  }

  const dist::ClipInterval& interval() const { return interval_; }

 private:
  nn::FlatParams params_;  // [mean, sigma]
  dist::ClipInterval interval_;
};

}  // namespace mpg::train
