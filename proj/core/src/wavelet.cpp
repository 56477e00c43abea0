#include "dplab/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dplab/sigma.hpp"

namespace dplab {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// One 2-D analysis step on the top-left cw x ch region of a row-major plane with stride w.
void analyze(std::vector<double>& p, int w, int cw, int ch) {
  std::vector<double> tmp(static_cast<std::size_t>(std::max(cw, ch)));
  const int hw = cw / 2;
  const int hh = ch / 2;
  for (int y = 0; y < ch; ++y) {
    double* row = &p[static_cast<std::size_t>(y) * w];
    for (int i = 0; i < hw; ++i) {
      tmp[i] = (row[2 * i] + row[2 * i + 1]) * kInvSqrt2;
      tmp[hw + i] = (row[2 * i] - row[2 * i + 1]) * kInvSqrt2;
    }
    std::copy_n(tmp.begin(), cw, row);
  }
  for (int x = 0; x < cw; ++x) {
    for (int i = 0; i < hh; ++i) {
      const double a = p[static_cast<std::size_t>(2 * i) * w + x];
      const double b = p[static_cast<std::size_t>(2 * i + 1) * w + x];
      tmp[i] = (a + b) * kInvSqrt2;
      tmp[hh + i] = (a - b) * kInvSqrt2;
    }
    for (int y = 0; y < ch; ++y) p[static_cast<std::size_t>(y) * w + x] = tmp[y];
  }
}

void synthesize(std::vector<double>& p, int w, int cw, int ch) {
  std::vector<double> tmp(static_cast<std::size_t>(std::max(cw, ch)));
  const int hw = cw / 2;
  const int hh = ch / 2;
  for (int x = 0; x < cw; ++x) {
    for (int i = 0; i < hh; ++i) {
      const double s = p[static_cast<std::size_t>(i) * w + x];
      const double d = p[static_cast<std::size_t>(hh + i) * w + x];
      tmp[2 * i] = (s + d) * kInvSqrt2;
      tmp[2 * i + 1] = (s - d) * kInvSqrt2;
    }
    for (int y = 0; y < ch; ++y) p[static_cast<std::size_t>(y) * w + x] = tmp[y];
  }
  for (int y = 0; y < ch; ++y) {
    double* row = &p[static_cast<std::size_t>(y) * w];
    for (int i = 0; i < hw; ++i) {
      tmp[2 * i] = (row[i] + row[hw + i]) * kInvSqrt2;
      tmp[2 * i + 1] = (row[i] - row[hw + i]) * kInvSqrt2;
    }
    std::copy_n(tmp.begin(), cw, row);
  }
}

struct Band {
  int x0, y0, w, h;
};

// Detail subbands (HL, LH, HH) of every level.
std::vector<Band> detail_bands(int w, int h, int levels) {
  std::vector<Band> bands;
  for (int k = 1; k <= levels; ++k) {
    const int bw = w >> k;
    const int bh = h >> k;
    bands.push_back({bw, 0, bw, bh});
    bands.push_back({0, bh, bw, bh});
    bands.push_back({bw, bh, bw, bh});
  }
  return bands;
}

double soft(double c, double t) {
  const double m = std::abs(c) - t;
  return m > 0.0 ? std::copysign(m, c) : 0.0;
}

}  // namespace

void haar_forward(std::vector<double>& plane, int w, int h, int levels) {
  for (int k = 0; k < levels; ++k) analyze(plane, w, w >> k, h >> k);
}

void haar_inverse(std::vector<double>& plane, int w, int h, int levels) {
  for (int k = levels - 1; k >= 0; --k) synthesize(plane, w, w >> k, h >> k);
}

Image wavelet_denoise(const Image& image, ShrinkMode mode, int levels,
                      std::optional<double> sigma) {
  if (levels < 1) throw std::invalid_argument("wavelet_denoise: levels must be >= 1");
  const int unit = 1 << levels;
  if (image.width() < unit || image.height() < unit) {
    throw std::invalid_argument("wavelet_denoise: image smaller than 2^levels");
  }
  const double sig = sigma ? *sigma : estimate_sigma(image).sigma;
  if (!(sig >= 0.0)) throw std::invalid_argument("wavelet_denoise: sigma must be >= 0");

  const int w = image.width();
  const int h = image.height();
  const int pw = (w + unit - 1) / unit * unit;
  const int ph = (h + unit - 1) / unit * unit;
  std::vector<double> plane(static_cast<std::size_t>(pw) * ph);
  for (int y = 0; y < ph; ++y) {
    for (int x = 0; x < pw; ++x) {
      plane[static_cast<std::size_t>(y) * pw + x] = image(reflect_index(x, w), reflect_index(y, h));
    }
  }
  haar_forward(plane, pw, ph, levels);

  const double universal = sig * std::sqrt(2.0 * std::log(static_cast<double>(image.size())));
  for (const auto& band : detail_bands(pw, ph, levels)) {
    double threshold = universal;
    if (mode == ShrinkMode::Bayes) {
      double energy = 0.0;
      double peak = 0.0;
      for (int y = band.y0; y < band.y0 + band.h; ++y) {
        for (int x = band.x0; x < band.x0 + band.w; ++x) {
          const double c = plane[static_cast<std::size_t>(y) * pw + x];
          energy += c * c;
          peak = std::max(peak, std::abs(c));
        }
      }
      const double var = energy / (static_cast<double>(band.w) * band.h);
      const double sigma_x = std::sqrt(std::max(var - sig * sig, 0.0));
      threshold = sigma_x > 0.0 ? sig * sig / sigma_x : peak;
    }
    for (int y = band.y0; y < band.y0 + band.h; ++y) {
      for (int x = band.x0; x < band.x0 + band.w; ++x) {
        double& c = plane[static_cast<std::size_t>(y) * pw + x];
        c = soft(c, threshold);
      }
    }
  }

  haar_inverse(plane, pw, ph, levels);
  Image out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) out(x, y) = static_cast<float>(plane[static_cast<std::size_t>(y) * pw + x]);
  }
  out.clip();
  return out;
}

}  // namespace dplab
