#pragma once

#include <cstdint>
#include <vector>

#include "dplab/nn/unet.hpp"

namespace dplab::nn {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Per-parameter first/second moments plus the step counter.
template <typename T>
struct AdamState {
  AdamConfig config;
  std::int64_t step = 0;
  std::vector<std::vector<T>> m;
  std::vector<std::vector<T>> v;
};

/// One bias-corrected Adam update of every parameter from its current gradient:
/// theta -= lr * m_hat / (sqrt(v_hat) + eps). Moment buffers are sized on the
/// first call; throws std::invalid_argument if the parameter set changes shape.
template <typename T>
void adam_step(std::vector<Parameter<T>>& params, AdamState<T>& state);

}  // namespace dplab::nn
