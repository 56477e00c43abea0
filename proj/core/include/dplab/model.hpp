#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "dplab/image.hpp"
#include "dplab/nn/adam.hpp"
#include "dplab/nn/tensor.hpp"
#include "dplab/nn/unet.hpp"

namespace dplab {

/// Dual-path model, or the single context U-Net trained alone as a baseline.
enum class ModelKind { Dpl, UnetBaseline };

std::string_view to_string(ModelKind kind) noexcept;
/// Accepts "dpl", "unet" and "unet_baseline"; throws std::invalid_argument otherwise.
ModelKind parse_model_kind(std::string_view name);

/// Which loss terms enter the objective. Disabled terms report 0.
struct LossTerms {
  bool noise = true;
  bool context = true;
  bool fusion = true;
};

/// Intermediate tensors of one forward pass, all (N, 1, H, W).
/// For the baseline only x, context and output are defined (output aliases context).
template <typename T>
struct DplBatch {
  nn::Tensor<T> x;
  /// Predicted noise field.
  nn::Tensor<T> eta;
  /// Intermediate estimate x - eta from the noise path.
  nn::Tensor<T> residual;
  /// Direct clean-image estimate from the context path.
  nn::Tensor<T> context;
  /// Fused output.
  nn::Tensor<T> output;
};

struct LossReport {
  double l_n = 0.0;
  double l_c = 0.0;
  double l_f = 0.0;
  /// Equals (l_n + l_c) + l_f, accumulated in that order in the model precision.
  double l_o = 0.0;
  int batch = 0;
};

template <typename T>
struct LossGraph {
  LossReport report;
  nn::Tensor<T> total;
};

/// Noise estimator, context estimator and fusion reconstructor (two input
/// channels: context then residual), each a U-Net with one output channel and
/// its own Adam state.
template <typename T>
class DplModel {
 public:
  /// `net` supplies depth and width; in_channels is set per sub-network.
  /// Sub-network seeds are derived from `seed` in the fixed order noise,
  /// context, fusion, so the baseline's context net matches the dual-path one.
  DplModel(ModelKind kind, nn::UNetConfig net, nn::AdamConfig adam, std::uint64_t seed);

  ModelKind kind() const noexcept { return kind_; }
  const nn::UNetConfig& net_config() const noexcept { return net_; }

  /// Throws std::invalid_argument for inputs that are not (N, 1, H, W) with
  /// H, W divisible by 2^depth.
  DplBatch<T> forward(const nn::Tensor<T>& x) const;

  /// Runs forward and returns the image-shaped final output.
  nn::Tensor<T> predict(const nn::Tensor<T>& x) const { return forward(x).output; }

  /// Forward, summed-loss backward through every enabled term, one Adam step per
  /// sub-network. Returns the pre-step losses. Throws dplab::TrainingError on a
  /// non-finite loss (parameters untouched).
  LossReport train_step(const nn::Tensor<T>& x, const nn::Tensor<T>& y, const LossTerms& terms = {},
                        long iteration = -1);

  void zero_grad();
  void set_learning_rate(double lr);

  nn::UNet<T>& noise_net() { return noise_; }
  nn::UNet<T>& context_net() { return context_; }
  nn::UNet<T>& fusion_net() { return fusion_; }
  const nn::UNet<T>& noise_net() const { return noise_; }
  const nn::UNet<T>& context_net() const { return context_; }
  const nn::UNet<T>& fusion_net() const { return fusion_; }
  nn::AdamState<T>& adam_noise() { return adam_noise_; }
  nn::AdamState<T>& adam_context() { return adam_context_; }
  nn::AdamState<T>& adam_fusion() { return adam_fusion_; }

  /// Every trainable parameter value, in checkpoint order.
  std::vector<std::vector<T>> snapshot() const;
  void restore(const std::vector<std::vector<T>>& values);

  /// DPLW checkpoint with "noise.", "context.", "fusion." name prefixes
  /// (baseline: "context." only).
  void save(const std::filesystem::path& path) const;
  void load(const std::filesystem::path& path);

 private:
  std::vector<const nn::UNet<T>*> active() const;

  ModelKind kind_;
  nn::UNetConfig net_;
  nn::UNet<T> noise_;
  nn::UNet<T> context_;
  nn::UNet<T> fusion_;
  nn::AdamState<T> adam_noise_, adam_context_, adam_fusion_;
};

/// L_n = mean((y - residual)^2), L_c = mean((y - context)^2),
/// L_f = mean((y - output)^2); total = (L_n + L_c) + L_f over enabled terms.
template <typename T>
LossGraph<T> dpl_loss(const DplBatch<T>& batch, const nn::Tensor<T>& y, const LossTerms& terms = {});

/// Stacks equally-sized images into an (N, 1, H, W) tensor.
template <typename T>
nn::Tensor<T> to_tensor(const std::vector<const Image*>& images);

/// Extracts batch element n of an (N, 1, H, W) tensor.
template <typename T>
Image to_image(const nn::Tensor<T>& t, int n);

extern template class DplModel<float>;
extern template class DplModel<double>;

}  // namespace dplab
