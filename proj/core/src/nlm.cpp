#include "dplab/nlm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dplab/sigma.hpp"

namespace dplab {

namespace {

constexpr double kMinStrength = 1e-6;

void check_params(const NlmParams& p) {
  if (p.patch_radius < 1 || p.search_radius < 1) {
    throw std::invalid_argument("nlm: radii must be >= 1");
  }
  if (p.h && !(*p.h > 0.0)) throw std::invalid_argument("nlm: h must be > 0");
}

// Image reflect-padded by `margin` on every side, in double.
struct Padded {
  int margin, stride;
  std::vector<double> v;

  Padded(const Image& img, int m) : margin(m), stride(img.width() + 2 * m) {
    const int ph = img.height() + 2 * m;
    v.resize(static_cast<std::size_t>(stride) * ph);
    for (int y = 0; y < ph; ++y) {
      for (int x = 0; x < stride; ++x) {
        v[static_cast<std::size_t>(y) * stride + x] =
            img(reflect_index(x - m, img.width()), reflect_index(y - m, img.height()));
      }
    }
  }

  double at(int x, int y) const {
    return v[static_cast<std::size_t>(y + margin) * stride + (x + margin)];
  }
};

}  // namespace

NlmStrength resolve_nlm_strength(const Image& image, const NlmParams& params) {
  check_params(params);
  const double sigma = params.sigma ? *params.sigma : estimate_sigma(image).sigma;
  if (!(sigma >= 0.0)) throw std::invalid_argument("nlm: sigma must be >= 0");
  const double h = params.h ? *params.h : std::max(params.h_factor * sigma, kMinStrength);
  return {sigma, h};
}

Image nlm(const Image& image, const NlmParams& params) {
  const auto strength = resolve_nlm_strength(image, params);
  const int w = image.width();
  const int h = image.height();
  const int pr = params.patch_radius;
  const int sr = params.search_radius;
  const Padded pad(image, pr + sr);
  const double patch_area = static_cast<double>(2 * pr + 1) * (2 * pr + 1);
  const double offset = 2.0 * strength.sigma * strength.sigma;
  const double inv_h2 = 1.0 / (strength.h * strength.h);

  // Squared differences over the patch-extended domain, then separable box sums.
  const int ew = w + 2 * pr;
  const int eh = h + 2 * pr;
  std::vector<double> diff(static_cast<std::size_t>(ew) * eh);
  std::vector<double> colsum(static_cast<std::size_t>(ew) * h);
  std::vector<double> num(image.size(), 0.0), den(image.size(), 0.0);

  for (int oy = -sr; oy <= sr; ++oy) {
    for (int ox = -sr; ox <= sr; ++ox) {
      for (int ey = 0; ey < eh; ++ey) {
        for (int ex = 0; ex < ew; ++ex) {
          const int x = ex - pr;
          const int y = ey - pr;
          const double d = pad.at(x, y) - pad.at(x + ox, y + oy);
          diff[static_cast<std::size_t>(ey) * ew + ex] = d * d;
        }
      }
      for (int ex = 0; ex < ew; ++ex) {
        double run = 0.0;
        for (int k = 0; k < 2 * pr + 1; ++k) run += diff[static_cast<std::size_t>(k) * ew + ex];
        colsum[ex] = run;
        for (int y = 1; y < h; ++y) {
          run += diff[static_cast<std::size_t>(y + 2 * pr) * ew + ex] -
                 diff[static_cast<std::size_t>(y - 1) * ew + ex];
          colsum[static_cast<std::size_t>(y) * ew + ex] = run;
        }
      }
      const int y_lo = std::max(0, -oy);
      const int y_hi = std::min(h, h - oy);
      const int x_lo = std::max(0, -ox);
      const int x_hi = std::min(w, w - ox);
      for (int y = y_lo; y < y_hi; ++y) {
        const double* row = &colsum[static_cast<std::size_t>(y) * ew];
        for (int x = x_lo; x < x_hi; ++x) {
          double d2 = 0.0;
          for (int k = 0; k < 2 * pr + 1; ++k) d2 += row[x + k];
          d2 /= patch_area;
          const double weight = std::exp(-std::max(d2 - offset, 0.0) * inv_h2);
          const auto idx = static_cast<std::size_t>(y) * w + x;
          num[idx] += weight * image(x + ox, y + oy);
          den[idx] += weight;
        }
      }
    }
  }

  Image out(w, h);
  auto px = out.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = static_cast<float>(num[i] / den[i]);
  return out;
}

Image nlm_pixel_weights(const Image& image, int x, int y, const NlmParams& params) {
  const auto strength = resolve_nlm_strength(image, params);
  if (x < 0 || y < 0 || x >= image.width() || y >= image.height()) {
    throw std::invalid_argument("nlm_pixel_weights: pixel outside the image");
  }
  const int pr = params.patch_radius;
  const int sr = params.search_radius;
  const Padded pad(image, pr + sr);
  const double patch_area = static_cast<double>(2 * pr + 1) * (2 * pr + 1);
  Image out(2 * sr + 1, 2 * sr + 1);
  for (int oy = -sr; oy <= sr; ++oy) {
    for (int ox = -sr; ox <= sr; ++ox) {
      const int qx = x + ox;
      const int qy = y + oy;
      if (qx < 0 || qy < 0 || qx >= image.width() || qy >= image.height()) continue;
      double d2 = 0.0;
      for (int ky = -pr; ky <= pr; ++ky) {
        for (int kx = -pr; kx <= pr; ++kx) {
          const double d = pad.at(x + kx, y + ky) - pad.at(qx + kx, qy + ky);
          d2 += d * d;
        }
      }
      d2 /= patch_area;
      out(ox + sr, oy + sr) = static_cast<float>(
          std::exp(-std::max(d2 - 2.0 * strength.sigma * strength.sigma, 0.0) /
                   (strength.h * strength.h)));
    }
  }
  return out;
}

}  // namespace dplab
