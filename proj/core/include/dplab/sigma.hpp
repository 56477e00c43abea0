#pragma once

#include "dplab/image.hpp"

namespace dplab {

enum class SigmaMethod { Known, Mad };

struct SigmaEstimate {
  double sigma = 0.0;
  SigmaMethod method = SigmaMethod::Mad;
};

/// MAD estimator on the finest Haar diagonal subband: median(|HH|) / 0.6745.
/// Throws std::invalid_argument for images smaller than 2x2.
SigmaEstimate estimate_sigma(const Image& image);

/// `known` when given (and >= 0), otherwise the MAD estimate.
SigmaEstimate resolve_sigma(const Image& image, const double* known);

}  // namespace dplab
