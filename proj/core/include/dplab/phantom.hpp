#pragma once

#include <cstdint>

#include "dplab/image.hpp"

namespace dplab {

/// Recipe for a synthetic test image: ellipses on a dark background, one
/// linear ramp strip, and band-limited sinusoidal texture.
class PhantomSpec {
 public:
  static constexpr float kMaxTexture = 0.3f;

  /// Throws std::invalid_argument for size outside [8, 8192], ellipse_count < 1
  /// or texture_amplitude outside [0, 0.3].
  PhantomSpec(int size = 128, int ellipse_count = 6, float texture_amplitude = 0.05f,
              std::uint64_t seed = 0);

  int size() const noexcept { return size_; }
  int ellipse_count() const noexcept { return ellipse_count_; }
  float texture_amplitude() const noexcept { return texture_amplitude_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  int size_;
  int ellipse_count_;
  float texture_amplitude_;
  std::uint64_t seed_;
};

inline constexpr float kPhantomBackground = 0.05f;

Image gen_phantom(const PhantomSpec& spec);

}  // namespace dplab
