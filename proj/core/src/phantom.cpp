#include "dplab/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dplab/rng.hpp"

namespace dplab {

PhantomSpec::PhantomSpec(int size, int ellipse_count, float texture_amplitude,
                         std::uint64_t seed)
    : size_(size),
      ellipse_count_(ellipse_count),
      texture_amplitude_(texture_amplitude),
      seed_(seed) {
  if (size < 8 || size > Image::kMaxSide) {
    throw std::invalid_argument("phantom size must lie in [8, 8192]");
  }
  if (ellipse_count < 1) throw std::invalid_argument("phantom needs at least one ellipse");
  if (!(texture_amplitude >= 0.0f && texture_amplitude <= kMaxTexture)) {
    throw std::invalid_argument("texture amplitude must lie in [0, 0.3]");
  }
}

namespace {

struct Ellipse {
  double cx, cy, a, b, cos_t, sin_t;
  float value;

  bool contains(double x, double y) const {
    const double dx = x - cx;
    const double dy = y - cy;
    const double u = (dx * cos_t + dy * sin_t) / a;
    const double v = (-dx * sin_t + dy * cos_t) / b;
    return u * u + v * v <= 1.0;
  }
};

struct Wave {
  double kx, ky, phase, weight;
};

}  // namespace

Image gen_phantom(const PhantomSpec& spec) {
  const int n = spec.size();
  const double s = n;
  Rng rng(spec.seed());
  Image image(n, n, kPhantomBackground);

  // Ramp strip along the bottom edge, left-to-right from 0.1 to 0.9.
  const int strip = std::max(1, n / 8);
  for (int y = n - strip; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      image(x, y) = static_cast<float>(0.1 + 0.8 * x / std::max(1.0, s - 1.0));
    }
  }

  std::vector<Ellipse> ellipses;
  ellipses.reserve(static_cast<std::size_t>(spec.ellipse_count()));
  for (int i = 0; i < spec.ellipse_count(); ++i) {
    Ellipse e{};
    e.cx = s * (0.25 + 0.5 * rng.uniform());
    e.cy = s * (0.2 + 0.45 * rng.uniform());
    e.a = s * (0.08 + 0.22 * rng.uniform());
    e.b = s * (0.08 + 0.22 * rng.uniform());
    const double theta = std::numbers::pi * rng.uniform();
    e.cos_t = std::cos(theta);
    e.sin_t = std::sin(theta);
    e.value = static_cast<float>(0.2 + 0.75 * rng.uniform());
    ellipses.push_back(e);
  }
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      for (const auto& e : ellipses) {
        if (e.contains(x + 0.5, y + 0.5)) image(x, y) = e.value;
      }
    }
  }

  // Texture: normalized sum of six plane waves between 3 and 12 cycles per image.
  if (spec.texture_amplitude() > 0.0f) {
    std::vector<Wave> waves(6);
    double total_weight = 0.0;
    for (auto& w : waves) {
      const double cycles = 3.0 + 9.0 * rng.uniform();
      const double angle = 2.0 * std::numbers::pi * rng.uniform();
      w.kx = 2.0 * std::numbers::pi * cycles * std::cos(angle) / s;
      w.ky = 2.0 * std::numbers::pi * cycles * std::sin(angle) / s;
      w.phase = 2.0 * std::numbers::pi * rng.uniform();
      w.weight = 0.5 + rng.uniform();
      total_weight += w.weight;
    }
    const double amp = spec.texture_amplitude() / total_weight;
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x) {
        double t = 0.0;
        for (const auto& w : waves) t += w.weight * std::sin(w.kx * x + w.ky * y + w.phase);
        image(x, y) += static_cast<float>(amp * t);
      }
    }
  }

  image.clip();
  return image;
}

}  // namespace dplab
