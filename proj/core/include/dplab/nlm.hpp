#pragma once

#include <optional>

#include "dplab/image.hpp"

namespace dplab {

struct NlmParams {
  int patch_radius = 3;
  int search_radius = 10;
  /// Filtering strength; defaults to h_factor * sigma.
  std::optional<double> h;
  double h_factor = 0.8;
  /// Noise level; MAD-estimated when absent.
  std::optional<double> sigma;
};

/// Resolved (sigma, h) pair actually used by nlm().
struct NlmStrength {
  double sigma;
  double h;
};
NlmStrength resolve_nlm_strength(const Image& image, const NlmParams& params);

/// Non-local means. For every p, averages x(q) over the search window clipped to
/// the image, weighted by exp(-max(d2 - 2 sigma^2, 0) / h^2) where d2 is the mean
/// squared difference of reflect-padded (2r+1)^2 patches around p and q.
Image nlm(const Image& image, const NlmParams& params = {});

/// Unnormalized weights of every search-window position for pixel (x, y);
/// a (2s+1)^2 image, zero where the window leaves the image.
Image nlm_pixel_weights(const Image& image, int x, int y, const NlmParams& params = {});

}  // namespace dplab
