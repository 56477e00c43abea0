#pragma once

#include "dplab/image.hpp"

namespace dplab {

struct Bm3dParams {
  int block = 8;
  int step = 4;
  /// Search window half-width; 19 gives a 39x39 window.
  int search_radius = 19;
  /// Power of two in {1, 2, 4, 8, 16}.
  int max_group = 16;
  /// Mean squared block distance limits (intensity^2 per pixel).
  double match_threshold_ht = 0.085;
  double match_threshold_wie = 0.025;
  /// Hard threshold = lambda_3d * sigma.
  double lambda_3d = 2.7;
};

struct Bm3dResult {
  Image basic;
  Image final;
  /// Total aggregation weight per pixel for each stage.
  Image basic_weight;
  Image final_weight;
};

/// Two-stage BM3D: hard-thresholded collaborative filtering (2-D DCT + Haar
/// along the group axis) followed by empirical Wiener refinement on groups
/// re-matched against the basic estimate. Output is clipped to [0, 1].
/// Throws std::invalid_argument for sigma <= 0, bad params, or images smaller
/// than 2 * block on either side.
Bm3dResult bm3d_stages(const Image& noisy, double sigma, const Bm3dParams& params = {});

inline Image bm3d(const Image& noisy, double sigma, const Bm3dParams& params = {}) {
  return bm3d_stages(noisy, sigma, params).final;
}

}  // namespace dplab
