#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dplab/nn/tensor.hpp"

namespace dplab::nn {

struct UNetConfig {
  int in_channels = 1;
  /// Number of 2x downsampling stages.
  int depth = 2;
  int base_channels = 16;
  int out_channels = 1;

  /// Throws std::invalid_argument for in_channels outside {1, 2}, depth < 1,
  /// base_channels < 1 or out_channels != 1.
  void validate() const;
  /// True when H and W are divisible by 2^depth.
  bool accepts(int height, int width) const noexcept;
};

template <typename T>
struct Parameter {
  std::string name;
  Tensor<T> value;
};

/// Vanilla U-Net: per encoder stage two (3x3 conv + ReLU) then 2x2 max-pool with
/// channels doubling from base; a two-conv bottleneck; per decoder stage a 2x2
/// up-convolution, concatenation with the matching skip and two (conv + ReLU);
/// a final 1x1 conv to one channel without activation. 3x3 convs are padded so
/// the output matches the input's H x W.
template <typename T>
class UNet {
 public:
  /// All parameters zero. Parameter registration order is fixed:
  /// enc*, bottleneck, dec* (deepest first), head.
  explicit UNet(UNetConfig config);

  /// He-normal weights, std sqrt(2 / fan_in) with fan_in = C_in * K * K
  /// (C_in for the up-convolution); biases zero. Deterministic in seed.
  void init_weights(std::uint64_t seed);

  /// Throws std::invalid_argument when x has the wrong channel count or H, W are
  /// not divisible by 2^depth. Output shape (N, 1, H, W).
  Tensor<T> forward(const Tensor<T>& x) const;

  const UNetConfig& config() const noexcept { return config_; }
  std::vector<Parameter<T>>& parameters() noexcept { return params_; }
  const std::vector<Parameter<T>>& parameters() const noexcept { return params_; }
  std::size_t parameter_count() const noexcept;
  void zero_grad();

 private:
  struct Conv {
    std::size_t weight, bias;
  };
  Conv add_conv(const std::string& name, int c_out, int c_in, int k);
  Conv add_upconv(const std::string& name, int c_in, int c_out);
  const Tensor<T>& p(std::size_t index) const { return params_[index].value; }

  UNetConfig config_;
  std::vector<Parameter<T>> params_;
  std::vector<Conv> encoder_, bottleneck_, up_, decoder_;
  Conv head_{};
};

extern template class UNet<float>;
extern template class UNet<double>;

}  // namespace dplab::nn
