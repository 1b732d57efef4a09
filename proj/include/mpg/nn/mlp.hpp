#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mpg::nn {

enum class Activation { kTanh, kSelu, kIdentity };

/// Feed-forward network shape: full width chain including input and output.
/// Hidden layers use `activation`; the final layer is linear.
struct MlpSpec {
  std::vector<int> layer_widths;
  Activation activation = Activation::kTanh;
  uint64_t seed = 0;

  int num_layers() const { return static_cast<int>(layer_widths.size()) - 1; }
  int input_dim() const { return layer_widths.front(); }
  int output_dim() const { return layer_widths.back(); }
  int param_count() const;

  /// Convenience builder: `hidden` copies of `width` between in and out.
  static MlpSpec make(int in, int out, int hidden, int width,
                      Activation act, uint64_t seed);
};

/// Flat parameter buffer. Per layer the block is [W row-major (out x in), b].
/// offsets has one entry per layer plus the total size, so the blocks
/// partition `values` exactly.
struct FlatParams {
  std::vector<double> values;
  std::vector<int> offsets;

  int size() const { return static_cast<int>(values.size()); }
};

/// Weights uniform in +-1/sqrt(fan_in), biases zero, drawn from
/// mt19937_64(spec.seed) in layer order. Bit-identical for equal seeds.
FlatParams init_params(const MlpSpec& spec);

/// Zero-filled buffer with the layout of `spec`.
FlatParams zero_params(const MlpSpec& spec);

std::vector<double> forward(const MlpSpec& spec, const FlatParams& params,
                            std::span<const double> input);

/// Gradient of upstream . output with respect to the parameters.
FlatParams backward(const MlpSpec& spec, const FlatParams& params,
                    std::span<const double> input,
                    std::span<const double> upstream);

}  // namespace mpg::nn
