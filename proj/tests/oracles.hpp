#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dplab/image.hpp"

// Direct, unoptimized reference implementations.
namespace dplab::test {

inline int mirror(int i, int n) {
  while (i < 0 || i >= n) i = i < 0 ? -i : 2 * (n - 1) - i;
  return i;
}

inline Image brute_mean(const Image& img, int r) {
  Image out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double s = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) s += img(mirror(x + dx, img.width()), mirror(y + dy, img.height()));
      }
      out(x, y) = static_cast<float>(s / ((2 * r + 1) * (2 * r + 1)));
    }
  }
  return out;
}

inline Image brute_median(const Image& img, int r) {
  Image out(img.width(), img.height());
  std::vector<float> v;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      v.clear();
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) v.push_back(img(mirror(x + dx, img.width()), mirror(y + dy, img.height())));
      }
      std::sort(v.begin(), v.end());
      out(x, y) = v[v.size() / 2];
    }
  }
  return out;
}

inline Image brute_gaussian(const Image& img, double sigma) {
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  double norm = 0.0;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) norm += std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
  }
  Image out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      double s = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          s += std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma)) *
               img(mirror(x + dx, img.width()), mirror(y + dy, img.height()));
        }
      }
      out(x, y) = static_cast<float>(s / norm);
    }
  }
  return out;
}

// Direct per-pixel non-local means.
inline Image brute_nlm(const Image& img, int pr, int sr, double sigma, double h) {
  const int w = img.width(), ht = img.height();
  Image out(w, ht);
  for (int y = 0; y < ht; ++y) {
    for (int x = 0; x < w; ++x) {
      double num = 0.0, den = 0.0;
      for (int qy = std::max(0, y - sr); qy <= std::min(ht - 1, y + sr); ++qy) {
        for (int qx = std::max(0, x - sr); qx <= std::min(w - 1, x + sr); ++qx) {
          double d2 = 0.0;
          for (int ky = -pr; ky <= pr; ++ky) {
            for (int kx = -pr; kx <= pr; ++kx) {
              const double d = static_cast<double>(img(mirror(x + kx, w), mirror(y + ky, ht))) -
                               img(mirror(qx + kx, w), mirror(qy + ky, ht));
              d2 += d * d;
            }
          }
          d2 /= (2 * pr + 1) * (2 * pr + 1);
          const double wgt = std::exp(-std::max(d2 - 2 * sigma * sigma, 0.0) / (h * h));
          num += wgt * img(qx, qy);
          den += wgt;
        }
      }
      out(x, y) = static_cast<float>(num / den);
    }
  }
  return out;
}

struct LocalMoments {
  double mx, my, vx, vy, cxy;
};

// Direct 2-D window over the valid region, Gaussian taps built independently.
inline LocalMoments direct_moments(const Image& a, const Image& b, int x0, int y0, int win, double sigma) {
  std::vector<double> g(static_cast<std::size_t>(win));
  double gs = 0.0;
  for (int k = 0; k < win; ++k) {
    const double d = k - (win - 1) / 2.0;
    g[k] = std::exp(-d * d / (2.0 * sigma * sigma));
    gs += g[k];
  }
  LocalMoments m{};
  double exx = 0.0, eyy = 0.0, exy = 0.0;
  for (int j = 0; j < win; ++j) {
    for (int i = 0; i < win; ++i) {
      const double w = g[i] * g[j] / (gs * gs);
      const double x = a(x0 + i, y0 + j), y = b(x0 + i, y0 + j);
      m.mx += w * x;
      m.my += w * y;
      exx += w * x * x;
      eyy += w * y * y;
      exy += w * x * y;
    }
  }
  m.vx = std::max(exx - m.mx * m.mx, 0.0);
  m.vy = std::max(eyy - m.my * m.my, 0.0);
  m.cxy = exy - m.mx * m.my;
  return m;
}

}  // namespace dplab::test
