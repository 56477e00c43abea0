#pragma once

#include <optional>
#include <vector>

#include "dplab/image.hpp"

namespace dplab {

/// BayesShrink (per-subband sigma^2 / sigma_x) or VisuShrink (sigma sqrt(2 ln n)).
enum class ShrinkMode { Bayes, Visu };

/// In-place multi-level orthonormal 2-D Haar transform of a w x h plane
/// (w and h divisible by 2^levels). Level k writes its LL band into the
/// top-left (w >> k) x (h >> k) corner, Mallat layout.
void haar_forward(std::vector<double>& plane, int w, int h, int levels);
void haar_inverse(std::vector<double>& plane, int w, int h, int levels);

/// Soft-threshold wavelet shrinkage on a Haar decomposition, then clip.
/// The image is reflect-padded up to a multiple of 2^levels and cropped back.
/// Throws std::invalid_argument when a side is smaller than 2^levels.
Image wavelet_denoise(const Image& image, ShrinkMode mode, int levels = 3,
                      std::optional<double> sigma = std::nullopt);

}  // namespace dplab
