#pragma once

#include <vector>

#include "dplab/image.hpp"

namespace dplab {

/// Mean squared error over all pixels. Throws std::invalid_argument on shape mismatch.
double mse(const Image& a, const Image& b);

/// 10 log10(L^2 / MSE) in dB; +infinity when the images are identical.
double psnr(const Image& a, const Image& b, double data_range = 1.0);
double psnr_from_mse(double mse_value, double data_range = 1.0);

struct SsimParams {
  double k1 = 0.01;
  double k2 = 0.03;
  double data_range = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  int window = 11;
  double window_sigma = 1.5;

  double c1() const { return (k1 * data_range) * (k1 * data_range); }
  double c2() const { return (k2 * data_range) * (k2 * data_range); }
  double c3() const { return c2() / 2.0; }
};

/// Normalized separable 1-D Gaussian taps (sum 1).
std::vector<double> ssim_window_1d(const SsimParams& params);

struct SsimResult {
  double mean = 0.0;
  /// Valid-region per-pixel scores, (width - window + 1) x (height - window + 1).
  int map_width = 0;
  int map_height = 0;
  std::vector<double> map;
};

/// Windowed SSIM (luminance * contrast * structure) averaged over the valid region.
/// Throws std::invalid_argument for mismatched shapes or images smaller than the window.
SsimResult ssim_full(const Image& a, const Image& b, const SsimParams& params = {},
                     bool keep_map = false);

inline double ssim(const Image& a, const Image& b, const SsimParams& params = {}) {
  return ssim_full(a, b, params).mean;
}

}  // namespace dplab
