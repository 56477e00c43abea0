#pragma once

#include "dplab/image.hpp"

namespace dplab {

/// Neighborhood-filter defaults. All filters use reflect boundaries.
struct FilterParams {
  int kernel_radius = 1;
  double gaussian_sigma = 1.0;
  double bilateral_sigma_spatial = 2.0;
  double bilateral_sigma_range = 0.1;
  int wiener_window = 5;
  int nlm_patch_radius = 3;
  int nlm_search_radius = 10;
  /// NLM filtering strength as a multiple of the noise sigma.
  double nlm_h_factor = 0.8;
};

/// Box mean over the (2r+1)^2 neighborhood, separable.
Image mean_filter(const Image& image, int radius = 1);

Image median_filter(const Image& image, int radius = 1);

/// Separable Gaussian with half-width ceil(3 sigma), taps normalized to sum 1.
Image gaussian_filter(const Image& image, double sigma = 1.0);
std::vector<double> gaussian_kernel_1d(double sigma);

/// Spatial-and-range weighted average over a half-width ceil(3 sigma_spatial) window.
Image bilateral_filter(const Image& image, double sigma_spatial = 2.0,
                       double sigma_range = 0.1);

}  // namespace dplab
