#include "dplab/filters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dplab {

namespace {

void check_radius(int radius) {
  if (radius < 1) throw std::invalid_argument("filter radius must be >= 1");
}

void check_sigma(double sigma, const char* what) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument(std::string(what) + " must be a positive finite value");
  }
}

// Separable correlation with symmetric taps centered at index taps.size() / 2.
Image separable(const Image& image, const std::vector<double>& taps) {
  const int w = image.width();
  const int h = image.height();
  const int r = static_cast<int>(taps.size() / 2);
  std::vector<double> rows(image.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) acc += taps[k + r] * image(reflect_index(x + k, w), y);
      rows[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  Image out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) {
        acc += taps[k + r] * rows[static_cast<std::size_t>(reflect_index(y + k, h)) * w + x];
      }
      out(x, y) = static_cast<float>(acc);
    }
  }
  return out;
}

}  // namespace

Image mean_filter(const Image& image, int radius) {
  check_radius(radius);
  const auto n = static_cast<std::size_t>(2 * radius + 1);
  return separable(image, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Image median_filter(const Image& image, int radius) {
  check_radius(radius);
  const int w = image.width();
  const int h = image.height();
  const int side = 2 * radius + 1;
  std::vector<float> window(static_cast<std::size_t>(side) * side);
  const auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
  Image out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::size_t k = 0;
      for (int dy = -radius; dy <= radius; ++dy) {
        const int yy = reflect_index(y + dy, h);
        for (int dx = -radius; dx <= radius; ++dx) window[k++] = image(reflect_index(x + dx, w), yy);
      }
      std::nth_element(window.begin(), mid, window.end());
      out(x, y) = *mid;
    }
  }
  return out;
}

std::vector<double> gaussian_kernel_1d(double sigma) {
  check_sigma(sigma, "gaussian sigma");
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * r + 1));
  double total = 0.0;
  for (int k = -r; k <= r; ++k) {
    taps[k + r] = std::exp(-0.5 * k * k / (sigma * sigma));
    total += taps[k + r];
  }
  for (auto& t : taps) t /= total;
  return taps;
}

Image gaussian_filter(const Image& image, double sigma) {
  return separable(image, gaussian_kernel_1d(sigma));
}

Image bilateral_filter(const Image& image, double sigma_spatial, double sigma_range) {
  check_sigma(sigma_spatial, "bilateral spatial sigma");
  check_sigma(sigma_range, "bilateral range sigma");
  const int w = image.width();
  const int h = image.height();
  const int r = static_cast<int>(std::ceil(3.0 * sigma_spatial));
  const int side = 2 * r + 1;
  std::vector<double> spatial(static_cast<std::size_t>(side) * side);
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      spatial[static_cast<std::size_t>(dy + r) * side + (dx + r)] =
          std::exp(-(dx * dx + dy * dy) / (2.0 * sigma_spatial * sigma_spatial));
    }
  }
  const double range_scale = -1.0 / (2.0 * sigma_range * sigma_range);
  Image out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double center = image(x, y);
      double num = 0.0;
      double den = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        const int yy = reflect_index(y + dy, h);
        const double* sw = &spatial[static_cast<std::size_t>(dy + r) * side];
        for (int dx = -r; dx <= r; ++dx) {
          const double v = image(reflect_index(x + dx, w), yy);
          const double d = v - center;
          const double weight = sw[dx + r] * std::exp(d * d * range_scale);
          num += weight * v;
          den += weight;
        }
      }
      out(x, y) = static_cast<float>(num / den);
    }
  }
  return out;
}

}  // namespace dplab
