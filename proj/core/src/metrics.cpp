#include "dplab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dplab {

double mse(const Image& a, const Image& b) {
  require_same_shape(a, b, "mse");
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  double acc = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const double d = static_cast<double>(pa[i]) - static_cast<double>(pb[i]);
    acc += d * d;
  }
  return acc / static_cast<double>(pa.size());
}

double psnr_from_mse(double mse_value, double data_range) {
  if (mse_value == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(data_range * data_range / mse_value);
}

double psnr(const Image& a, const Image& b, double data_range) {
  return psnr_from_mse(mse(a, b), data_range);
}

std::vector<double> ssim_window_1d(const SsimParams& params) {
  const int n = params.window;
  const double center = (n - 1) / 2.0;
  std::vector<double> taps(static_cast<std::size_t>(n));
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = i - center;
    taps[static_cast<std::size_t>(i)] =
        std::exp(-d * d / (2.0 * params.window_sigma * params.window_sigma));
    total += taps[static_cast<std::size_t>(i)];
  }
  for (auto& t : taps) t /= total;
  return taps;
}

namespace {

// Valid-region separable filtering of a double plane.
std::vector<double> filter_valid(const std::vector<double>& src, int w, int h,
                                 const std::vector<double>& taps) {
  const int n = static_cast<int>(taps.size());
  const int ow = w - n + 1;
  const int oh = h - n + 1;
  std::vector<double> rows(static_cast<std::size_t>(ow) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += taps[k] * src[static_cast<std::size_t>(y) * w + x + k];
      rows[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += taps[k] * rows[static_cast<std::size_t>(y + k) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  return out;
}

double power(double base, double exponent) {
  return exponent == 1.0 ? base : std::pow(base, exponent);
}

}  // namespace

SsimResult ssim_full(const Image& a, const Image& b, const SsimParams& params, bool keep_map) {
  require_same_shape(a, b, "ssim");
  const int win = params.window;
  if (win < 1 || a.width() < win || a.height() < win) {
    throw std::invalid_argument("ssim: image smaller than the window");
  }
  const int w = a.width();
  const int h = a.height();
  const std::size_t n = a.size();
  std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = a.pixels()[i];
    y[i] = b.pixels()[i];
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto taps = ssim_window_1d(params);
  const auto mx = filter_valid(x, w, h, taps);
  const auto my = filter_valid(y, w, h, taps);
  const auto mxx = filter_valid(xx, w, h, taps);
  const auto myy = filter_valid(yy, w, h, taps);
  const auto mxy = filter_valid(xy, w, h, taps);

  const double c1 = params.c1();
  const double c2 = params.c2();
  const double c3 = params.c3();

  SsimResult result;
  result.map_width = w - win + 1;
  result.map_height = h - win + 1;
  if (keep_map) result.map.resize(mx.size());
  double total = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double var_x = std::max(mxx[i] - mx[i] * mx[i], 0.0);
    const double var_y = std::max(myy[i] - my[i] * my[i], 0.0);
    const double cov = mxy[i] - mx[i] * my[i];
    const double sx = std::sqrt(var_x);
    const double sy = std::sqrt(var_y);
    const double l = (2.0 * mx[i] * my[i] + c1) / (mx[i] * mx[i] + my[i] * my[i] + c1);
    const double c = (2.0 * sx * sy + c2) / (var_x + var_y + c2);
    const double s = (cov + c3) / (sx * sy + c3);
    const double score = power(l, params.alpha) * power(c, params.beta) * power(s, params.gamma);
    if (keep_map) result.map[i] = score;
    total += score;
  }
  result.mean = total / static_cast<double>(mx.size());
  return result;
}

}  // namespace dplab
