#include "dplab/nn/unet.hpp"

#include <cmath>
#include <stdexcept>

#include "dplab/nn/ops.hpp"
#include "dplab/rng.hpp"

namespace dplab::nn {

void UNetConfig::validate() const {
  if (in_channels != 1 && in_channels != 2) throw std::invalid_argument("UNet: in_channels must be 1 or 2");
  if (depth < 1 || depth > 8) throw std::invalid_argument("UNet: depth must lie in [1, 8]");
  if (base_channels < 1) throw std::invalid_argument("UNet: base_channels must be >= 1");
  if (out_channels != 1) throw std::invalid_argument("UNet: out_channels must be 1");
}

bool UNetConfig::accepts(int height, int width) const noexcept {
  const int unit = 1 << depth;
  return height > 0 && width > 0 && height % unit == 0 && width % unit == 0;
}

template <typename T>
typename UNet<T>::Conv UNet<T>::add_conv(const std::string& name, int c_out, int c_in, int k) {
  Conv conv{params_.size(), params_.size() + 1};
  params_.push_back({name + ".weight", Tensor<T>::zeros({c_out, c_in, k, k}, true)});
  params_.push_back({name + ".bias", Tensor<T>::zeros({1, c_out, 1, 1}, true)});
  return conv;
}

template <typename T>
typename UNet<T>::Conv UNet<T>::add_upconv(const std::string& name, int c_in, int c_out) {
  Conv conv{params_.size(), params_.size() + 1};
  params_.push_back({name + ".weight", Tensor<T>::zeros({c_in, c_out, 2, 2}, true)});
  params_.push_back({name + ".bias", Tensor<T>::zeros({1, c_out, 1, 1}, true)});
  return conv;
}

template <typename T>
UNet<T>::UNet(UNetConfig config) : config_(config) {
  config_.validate();
  const int base = config_.base_channels;
  int c_in = config_.in_channels;
  for (int s = 0; s < config_.depth; ++s) {
    const int c = base << s;
    const std::string stage = "enc" + std::to_string(s);
    encoder_.push_back(add_conv(stage + ".conv1", c, c_in, 3));
    encoder_.push_back(add_conv(stage + ".conv2", c, c, 3));
    c_in = c;
  }
  const int bottom = base << config_.depth;
  bottleneck_.push_back(add_conv("bottleneck.conv1", bottom, c_in, 3));
  bottleneck_.push_back(add_conv("bottleneck.conv2", bottom, bottom, 3));
  c_in = bottom;
  for (int s = config_.depth - 1; s >= 0; --s) {
    const int c = base << s;
    const std::string stage = "dec" + std::to_string(s);
    up_.push_back(add_upconv(stage + ".up", c_in, c));
    decoder_.push_back(add_conv(stage + ".conv1", c, 2 * c, 3));
    decoder_.push_back(add_conv(stage + ".conv2", c, c, 3));
    c_in = c;
  }
  head_ = add_conv("head", config_.out_channels, c_in, 1);
}

template <typename T>
void UNet<T>::init_weights(std::uint64_t seed) {
  Rng rng(seed);
  for (auto& param : params_) {
    auto data = param.value.data();
    const Shape s = param.value.shape();
    const bool is_bias = param.name.ends_with(".bias");
    if (is_bias) {
      std::fill(data.begin(), data.end(), T(0));
      continue;
    }
    const bool is_up = param.name.ends_with(".up.weight");
    const double fan_in = is_up ? s.n : static_cast<double>(s.c) * s.h * s.w;
    const double stddev = std::sqrt(2.0 / fan_in);
    for (auto& v : data) v = static_cast<T>(rng.normal(0.0, stddev));
  }
}

template <typename T>
Tensor<T> UNet<T>::forward(const Tensor<T>& x) const {
  const Shape xs = x.shape();
  if (xs.c != config_.in_channels) {
    throw std::invalid_argument("UNet: expected " + std::to_string(config_.in_channels) +
                                " input channels, got " + xs.str());
  }
  if (!config_.accepts(xs.h, xs.w)) {
    throw std::invalid_argument("UNet: input " + xs.str() + " not divisible by 2^" +
                                std::to_string(config_.depth));
  }
  auto block = [this](const Tensor<T>& in, const Conv& a, const Conv& b) {
    auto h = relu(conv2d(in, p(a.weight), p(a.bias)));
    return relu(conv2d(h, p(b.weight), p(b.bias)));
  };

  std::vector<Tensor<T>> skips;
  Tensor<T> h = x;
  for (int s = 0; s < config_.depth; ++s) {
    h = block(h, encoder_[2 * s], encoder_[2 * s + 1]);
    skips.push_back(h);
    h = maxpool2(h);
  }
  h = block(h, bottleneck_[0], bottleneck_[1]);
  for (int i = 0; i < config_.depth; ++i) {
    const Conv& up = up_[i];
    h = upconv2(h, p(up.weight), p(up.bias));
    h = concat_channels(skips[config_.depth - 1 - i], h);
    h = block(h, decoder_[2 * i], decoder_[2 * i + 1]);
  }
  return conv1x1(h, p(head_.weight), p(head_.bias));
}

template <typename T>
std::size_t UNet<T>::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const auto& param : params_) n += param.value.numel();
  return n;
}

template <typename T>
void UNet<T>::zero_grad() {
  for (auto& param : params_) param.value.zero_grad();
}

template class UNet<float>;
template class UNet<double>;

}  // namespace dplab::nn
