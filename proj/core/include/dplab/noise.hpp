#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dplab/image.hpp"
#include "dplab/rng.hpp"

namespace dplab {

enum class NoiseFamily { Gaussian, Awgn, Speckle };

std::string_view to_string(NoiseFamily family) noexcept;
/// Accepts "gaussian", "awgn", "speckle"; throws std::invalid_argument otherwise.
NoiseFamily parse_noise_family(std::string_view name);

/// Additive N(mean, var).
struct GaussianParams {
  double mean = 0.0;
  double var = 0.005;
};

/// Additive N(0, s2) with one per-image variance s2 ~ N(loc, scale^2), clamped at 0.
struct AwgnParams {
  double loc = 0.01;
  double scale = 0.0001;
};

/// Multiplicative: x + x * n, n ~ N(mean, var).
struct SpeckleParams {
  double mean = 0.1;
  double var = 0.01;
};

using NoiseParams = std::variant<GaussianParams, AwgnParams, SpeckleParams>;

/// A noise family with its parameters and seed; fully determines a corruption.
struct NoiseSpec {
  NoiseParams params = GaussianParams{};
  std::uint64_t seed = 0;
  bool clip = true;

  NoiseFamily family() const noexcept;
  /// Defaults for a family (mean 0 / var 0.005, loc 0.01 / scale 1e-4, mean 0.1 / var 0.01).
  static NoiseSpec defaults(NoiseFamily family, std::uint64_t seed = 0);
  /// Override one named parameter ("mean", "var", "loc", "scale").
  /// Throws std::invalid_argument for names foreign to the family or negative variances.
  void set_param(std::string_view key, double value);
  /// "mean=0;var=0.005" style listing, in declaration order.
  std::string describe() const;
};

/// Pre-clip additive noise samples for n pixels.
std::vector<double> gaussian_field(std::size_t n, double mean, double var, Rng& rng);

Image add_gaussian(const Image& image, double mean, double var, Rng& rng, bool clip = true);
Image add_awgn(const Image& image, double loc, double scale, Rng& rng, bool clip = true);
Image add_speckle(const Image& image, double mean, double var, Rng& rng, bool clip = true);

/// Draws the per-image AWGN variance (no draw when scale == 0).
double sample_awgn_variance(double loc, double scale, Rng& rng);

/// Applies spec with a fresh Rng(spec.seed).
Image apply_noise(const Image& image, const NoiseSpec& spec);

}  // namespace dplab
