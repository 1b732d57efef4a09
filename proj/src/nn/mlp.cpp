#include "mpg/nn/mlp.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace mpg::nn {

namespace {

// standard SELU constants
constexpr double kSeluLambda = 1.0507009873554804934;
constexpr double kSeluAlpha = 1.6732632423543772848;

double activate(Activation act, double x) {
  switch (act) {
    case Activation::kTanh:
      return std::tanh(x);
    case Activation::kSelu:
      return x > 0.0 ? kSeluLambda * x : kSeluLambda * kSeluAlpha * std::expm1(x);
    case Activation::kIdentity:
      return x;
  }
  return x;
}

// derivative expressed through the pre-activation value
double activate_grad(Activation act, double x) {
  switch (act) {
    case Activation::kTanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case Activation::kSelu:
      return x > 0.0 ? kSeluLambda : kSeluLambda * kSeluAlpha * std::exp(x);
    case Activation::kIdentity:
      return 1.0;
  }
  return 1.0;
}

void check_spec(const MlpSpec& spec) {
  if (spec.layer_widths.size() < 2) {
    throw std::invalid_argument("MlpSpec: need at least one layer");
  }
  for (int w : spec.layer_widths) {
    if (w <= 0) throw std::invalid_argument("MlpSpec: widths must be positive");
  }
}

std::vector<int> layer_offsets(const MlpSpec& spec) {
  std::vector<int> offsets(static_cast<size_t>(spec.num_layers()) + 1);
  offsets[0] = 0;
  for (int l = 0; l < spec.num_layers(); ++l) {
    const int in = spec.layer_widths[static_cast<size_t>(l)];
    const int out = spec.layer_widths[static_cast<size_t>(l) + 1];
    offsets[static_cast<size_t>(l) + 1] =
        offsets[static_cast<size_t>(l)] + out * in + out;
  }
  return offsets;
}

}  // namespace

int MlpSpec::param_count() const {
  check_spec(*this);
  return layer_offsets(*this).back();
}

MlpSpec MlpSpec::make(int in, int out, int hidden, int width, Activation act,
                      uint64_t seed) {
  MlpSpec spec;
  spec.layer_widths.push_back(in);
  for (int i = 0; i < hidden; ++i) spec.layer_widths.push_back(width);
  spec.layer_widths.push_back(out);
  spec.activation = act;
  spec.seed = seed;
  return spec;
}

FlatParams zero_params(const MlpSpec& spec) {
  check_spec(spec);
  FlatParams p;
  p.offsets = layer_offsets(spec);
  p.values.assign(static_cast<size_t>(p.offsets.back()), 0.0);
  return p;
}

FlatParams init_params(const MlpSpec& spec) {
  FlatParams p = zero_params(spec);
  std::mt19937_64 engine(spec.seed);
  const auto uniform = [&engine]() {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
  };
  for (int l = 0; l < spec.num_layers(); ++l) {
    const int in = spec.layer_widths[static_cast<size_t>(l)];
    const int out = spec.layer_widths[static_cast<size_t>(l) + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    double* w = p.values.data() + p.offsets[static_cast<size_t>(l)];
    for (int i = 0; i < out * in; ++i) {
      w[i] = bound * (2.0 * uniform() - 1.0);
    }
    // biases stay zero
  }
  return p;
}

std::vector<double> forward(const MlpSpec& spec, const FlatParams& params,
                            std::span<const double> input) {
  check_spec(spec);
  if (static_cast<int>(input.size()) != spec.input_dim()) {
    throw std::invalid_argument("forward: input dimension mismatch");
  }
  std::vector<double> cur(input.begin(), input.end());
  std::vector<double> next;
  for (int l = 0; l < spec.num_layers(); ++l) {
    const int in = spec.layer_widths[static_cast<size_t>(l)];
    const int out = spec.layer_widths[static_cast<size_t>(l) + 1];
    const double* w = params.values.data() + params.offsets[static_cast<size_t>(l)];
    const double* b = w + out * in;
    next.assign(static_cast<size_t>(out), 0.0);
    for (int i = 0; i < out; ++i) {
      double acc = b[i];
      const double* row = w + i * in;
      for (int j = 0; j < in; ++j) acc += row[j] * cur[static_cast<size_t>(j)];
      next[static_cast<size_t>(i)] =
          (l + 1 < spec.num_layers()) ? activate(spec.activation, acc) : acc;
    }
    cur.swap(next);
  }
  return cur;
}

FlatParams backward(const MlpSpec& spec, const FlatParams& params,
                    std::span<const double> input,
                    std::span<const double> upstream) {
  check_spec(spec);
  if (static_cast<int>(input.size()) != spec.input_dim()) {
    throw std::invalid_argument("backward: input dimension mismatch");
  }
  if (static_cast<int>(upstream.size()) != spec.output_dim()) {
    throw std::invalid_argument("backward: upstream dimension mismatch");
  }
  const int layers = spec.num_layers();

  // forward pass keeping post-activation values and pre-activations
  std::vector<std::vector<double>> acts(static_cast<size_t>(layers) + 1);
  std::vector<std::vector<double>> preacts(static_cast<size_t>(layers));
  acts[0].assign(input.begin(), input.end());
  for (int l = 0; l < layers; ++l) {
    const int in = spec.layer_widths[static_cast<size_t>(l)];
    const int out = spec.layer_widths[static_cast<size_t>(l) + 1];
    const double* w = params.values.data() + params.offsets[static_cast<size_t>(l)];
    const double* b = w + out * in;
    preacts[static_cast<size_t>(l)].assign(static_cast<size_t>(out), 0.0);
    acts[static_cast<size_t>(l) + 1].assign(static_cast<size_t>(out), 0.0);
    for (int i = 0; i < out; ++i) {
      double acc = b[i];
      const double* row = w + i * in;
      for (int j = 0; j < in; ++j) {
        acc += row[j] * acts[static_cast<size_t>(l)][static_cast<size_t>(j)];
      }
      preacts[static_cast<size_t>(l)][static_cast<size_t>(i)] = acc;
      acts[static_cast<size_t>(l) + 1][static_cast<size_t>(i)] =
          (l + 1 < layers) ? activate(spec.activation, acc) : acc;
    }
  }

  FlatParams grad = zero_params(spec);
  std::vector<double> delta(upstream.begin(), upstream.end());
  std::vector<double> delta_prev;
  for (int l = layers - 1; l >= 0; --l) {
    const int in = spec.layer_widths[static_cast<size_t>(l)];
    const int out = spec.layer_widths[static_cast<size_t>(l) + 1];
    const double* w = params.values.data() + params.offsets[static_cast<size_t>(l)];
    double* gw = grad.values.data() + grad.offsets[static_cast<size_t>(l)];
    double* gb = gw + out * in;
    if (l + 1 < layers) {
      for (int i = 0; i < out; ++i) {
        delta[static_cast<size_t>(i)] *= activate_grad(
            spec.activation, preacts[static_cast<size_t>(l)][static_cast<size_t>(i)]);
      }
    }
    const auto& below = acts[static_cast<size_t>(l)];
    for (int i = 0; i < out; ++i) {
      const double di = delta[static_cast<size_t>(i)];
      double* grow = gw + i * in;
      for (int j = 0; j < in; ++j) grow[j] = di * below[static_cast<size_t>(j)];
      gb[i] = di;
    }
    if (l > 0) {
      delta_prev.assign(static_cast<size_t>(in), 0.0);
      for (int i = 0; i < out; ++i) {
        const double di = delta[static_cast<size_t>(i)];
        const double* row = w + i * in;
        for (int j = 0; j < in; ++j) delta_prev[static_cast<size_t>(j)] += di * row[j];
      }
      delta.swap(delta_prev);
    }
  }
  return grad;
}

}  // namespace mpg::nn
