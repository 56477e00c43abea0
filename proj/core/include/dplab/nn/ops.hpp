#pragma once

#include "dplab/nn/tensor.hpp"

namespace dplab::nn {

/// Cross-correlation with zero padding. weight: (C_out, C_in, K, K);
/// bias: (1, C_out, 1, 1). Throws std::invalid_argument on shape mismatch.
template <typename T>
Tensor<T> conv2d(const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& bias,
                 int stride = 1, int pad = 1);

/// Pointwise convolution: weight (C_out, C_in, 1, 1).
template <typename T>
Tensor<T> conv1x1(const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& bias);

/// 2x2 transposed convolution, stride 2. weight: (C_in, C_out, 2, 2).
template <typename T>
Tensor<T> upconv2(const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& bias);

/// Subgradient 0 at exactly 0.
template <typename T>
Tensor<T> relu(const Tensor<T>& x);

/// 2x2 max pooling, stride 2; gradient goes to the first maximum in scan order.
template <typename T>
Tensor<T> maxpool2(const Tensor<T>& x);

/// Channel concatenation (a first). N, H, W must match.
template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b);

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b);

template <typename T>
Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b);

/// Sum of all elements, as a single-element tensor.
template <typename T>
Tensor<T> sum(const Tensor<T>& x);

/// mean((a - b)^2) over all elements.
template <typename T>
Tensor<T> mse_loss(const Tensor<T>& a, const Tensor<T>& b);

}  // namespace dplab::nn
