#include "dplab/wiener.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "dplab/sigma.hpp"

namespace dplab {

Image wiener_filter(const Image& image, int window, std::optional<double> sigma) {
  if (window < 3 || window % 2 == 0) {
    throw std::invalid_argument("wiener_filter: window must be odd and >= 3");
  }
  const double sig = sigma ? *sigma : estimate_sigma(image).sigma;
  if (!(sig >= 0.0)) throw std::invalid_argument("wiener_filter: sigma must be >= 0");
  const double noise_power = sig * sig;
  const int r = window / 2;
  const int w = image.width();
  const int h = image.height();
  const double inv_count = 1.0 / (static_cast<double>(window) * window);

  // Horizontal running sums of x and x^2, then vertical.
  std::vector<double> s1(image.size()), s2(image.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double a = 0.0, b = 0.0;
      for (int k = -r; k <= r; ++k) {
        const double v = image(reflect_index(x + k, w), y);
        a += v;
        b += v * v;
      }
      s1[static_cast<std::size_t>(y) * w + x] = a;
      s2[static_cast<std::size_t>(y) * w + x] = b;
    }
  }
  Image out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double a = 0.0, b = 0.0;
      for (int k = -r; k <= r; ++k) {
        const auto idx = static_cast<std::size_t>(reflect_index(y + k, h)) * w + x;
        a += s1[idx];
        b += s2[idx];
      }
      const double mu = a * inv_count;
      const double var = std::max(b * inv_count - mu * mu, 0.0);
      const double denom = std::max(var, noise_power);
      const double gain = denom > 0.0 ? std::max(var - noise_power, 0.0) / denom : 1.0;
      out(x, y) = static_cast<float>(mu + gain * (image(x, y) - mu));
    }
  }
  return out;
}

}  // namespace dplab
