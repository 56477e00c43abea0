#include "dplab/nn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace dplab::nn {

template <typename T>
void adam_step(std::vector<Parameter<T>>& params, AdamState<T>& state) {
  if (state.m.empty()) {
    for (const auto& p : params) {
      state.m.emplace_back(p.value.numel(), T(0));
      state.v.emplace_back(p.value.numel(), T(0));
    }
  }
  if (state.m.size() != params.size()) throw std::invalid_argument("adam_step: parameter count changed");
  ++state.step;
  const auto& c = state.config;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(c.beta1, t);
  const double bc2 = 1.0 - std::pow(c.beta2, t);
  const T b1 = static_cast<T>(c.beta1);
  const T b2 = static_cast<T>(c.beta2);
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& tensor = params[k].value;
    auto& m = state.m[k];
    auto& v = state.v[k];
    if (m.size() != tensor.numel()) throw std::invalid_argument("adam_step: parameter shape changed");
    if (!tensor.has_grad()) continue;
    auto theta = tensor.data();
    const auto g = tensor.grad();
    for (std::size_t i = 0; i < theta.size(); ++i) {
      m[i] = b1 * m[i] + (T(1) - b1) * g[i];
      v[i] = b2 * v[i] + (T(1) - b2) * g[i] * g[i];
      const double m_hat = static_cast<double>(m[i]) / bc1;
      const double v_hat = static_cast<double>(v[i]) / bc2;
      theta[i] = static_cast<T>(static_cast<double>(theta[i]) - c.lr * m_hat / (std::sqrt(v_hat) + c.eps));
    }
  }
}

template void adam_step(std::vector<Parameter<float>>&, AdamState<float>&);
template void adam_step(std::vector<Parameter<double>>&, AdamState<double>&);

}  // namespace dplab::nn
