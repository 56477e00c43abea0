#include "dplab/bm3d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace dplab {

namespace {

struct Match {
  double dist;
  int x, y;
};

class BlockTransform {
 public:
  explicit BlockTransform(int n) : n_(n), c_(static_cast<std::size_t>(n) * n), tmp_(c_.size()) {
    for (int k = 0; k < n; ++k) {
      const double alpha = std::sqrt((k == 0 ? 1.0 : 2.0) / n);
      for (int i = 0; i < n; ++i) {
        c_[static_cast<std::size_t>(k) * n + i] =
            alpha * std::cos(std::numbers::pi * (2 * i + 1) * k / (2.0 * n));
      }
    }
  }

  int size() const { return n_; }

  // out = C * block * C^T for the block at (x, y) of a plane with stride w.
  void forward(const std::vector<double>& plane, int w, int x, int y, double* out) {
    for (int k = 0; k < n_; ++k) {
      for (int j = 0; j < n_; ++j) {
        double acc = 0.0;
        for (int i = 0; i < n_; ++i) {
          acc += c_[static_cast<std::size_t>(k) * n_ + i] *
                 plane[static_cast<std::size_t>(y + i) * w + x + j];
        }
        tmp_[static_cast<std::size_t>(k) * n_ + j] = acc;
      }
    }
    for (int k = 0; k < n_; ++k) {
      for (int l = 0; l < n_; ++l) {
        double acc = 0.0;
        for (int j = 0; j < n_; ++j) {
          acc += tmp_[static_cast<std::size_t>(k) * n_ + j] * c_[static_cast<std::size_t>(l) * n_ + j];
        }
        out[k * n_ + l] = acc;
      }
    }
  }

  // block = C^T * coef * C, in place on n*n values.
  void inverse(double* coef) {
    for (int i = 0; i < n_; ++i) {
      for (int l = 0; l < n_; ++l) {
        double acc = 0.0;
        for (int k = 0; k < n_; ++k) {
          acc += c_[static_cast<std::size_t>(k) * n_ + i] * coef[k * n_ + l];
        }
        tmp_[static_cast<std::size_t>(i) * n_ + l] = acc;
      }
    }
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        double acc = 0.0;
        for (int l = 0; l < n_; ++l) {
          acc += tmp_[static_cast<std::size_t>(i) * n_ + l] * c_[static_cast<std::size_t>(l) * n_ + j];
        }
        coef[i * n_ + j] = acc;
      }
    }
  }

 private:
  int n_;
  std::vector<double> c_;
  std::vector<double> tmp_;
};

// Orthonormal full-depth Haar across `count` (a power of two) rows of `stride` values.
void haar_group(std::vector<double>& g, int count, int stride, bool inverse) {
  std::vector<double> tmp(static_cast<std::size_t>(count));
  const double s = 1.0 / std::numbers::sqrt2;
  for (int c = 0; c < stride; ++c) {
    if (!inverse) {
      for (int len = count; len > 1; len /= 2) {
        const int half = len / 2;
        for (int i = 0; i < half; ++i) {
          const double a = g[static_cast<std::size_t>(2 * i) * stride + c];
          const double b = g[static_cast<std::size_t>(2 * i + 1) * stride + c];
          tmp[i] = (a + b) * s;
          tmp[half + i] = (a - b) * s;
        }
        for (int i = 0; i < len; ++i) g[static_cast<std::size_t>(i) * stride + c] = tmp[i];
      }
    } else {
      for (int len = 2; len <= count; len *= 2) {
        const int half = len / 2;
        for (int i = 0; i < half; ++i) {
          const double a = g[static_cast<std::size_t>(i) * stride + c];
          const double d = g[static_cast<std::size_t>(half + i) * stride + c];
          tmp[2 * i] = (a + d) * s;
          tmp[2 * i + 1] = (a - d) * s;
        }
        for (int i = 0; i < len; ++i) g[static_cast<std::size_t>(i) * stride + c] = tmp[i];
      }
    }
  }
}

std::vector<int> grid_positions(int extent, int block, int step) {
  std::vector<int> pos;
  for (int p = 0; p + block <= extent; p += step) pos.push_back(p);
  if (pos.back() != extent - block) pos.push_back(extent - block);
  return pos;
}

int floor_pow2(int n) {
  int p = 1;
  while (p * 2 <= n) p *= 2;
  return p;
}

class Stage {
 public:
  Stage(int w, int h, const Bm3dParams& params)
      : w_(w), h_(h), params_(params), num_(static_cast<std::size_t>(w) * h, 0.0),
        den_(num_.size(), 0.0) {}

  // Reference first, then candidates by ascending distance (scan order on ties),
  // truncated to the largest power of two not above max_group.
  std::vector<Match> match(const std::vector<double>& plane, int rx, int ry, double threshold) const {
    const int n = params_.block;
    const double inv_area = 1.0 / (static_cast<double>(n) * n);
    std::vector<Match> found;
    found.push_back({0.0, rx, ry});
    const int x0 = std::max(0, rx - params_.search_radius);
    const int x1 = std::min(w_ - n, rx + params_.search_radius);
    const int y0 = std::max(0, ry - params_.search_radius);
    const int y1 = std::min(h_ - n, ry + params_.search_radius);
    const double limit = threshold / inv_area;
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        if (x == rx && y == ry) continue;
        double acc = 0.0;
        for (int i = 0; i < n && acc <= limit; ++i) {
          const double* a = &plane[static_cast<std::size_t>(ry + i) * w_ + rx];
          const double* b = &plane[static_cast<std::size_t>(y + i) * w_ + x];
          for (int j = 0; j < n; ++j) {
            const double d = a[j] - b[j];
            acc += d * d;
          }
        }
        if (acc <= limit) found.push_back({acc * inv_area, x, y});
      }
    }
    std::stable_sort(found.begin() + 1, found.end(),
                     [](const Match& a, const Match& b) { return a.dist < b.dist; });
    const int keep = floor_pow2(std::min(static_cast<int>(found.size()), params_.max_group));
    found.resize(static_cast<std::size_t>(keep));
    return found;
  }

  void aggregate(const std::vector<Match>& group, const std::vector<double>& blocks, double weight) {
    const int n = params_.block;
    for (std::size_t g = 0; g < group.size(); ++g) {
      const double* b = &blocks[g * static_cast<std::size_t>(n) * n];
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const auto idx = static_cast<std::size_t>(group[g].y + i) * w_ + group[g].x + j;
          num_[idx] += weight * b[i * n + j];
          den_[idx] += weight;
        }
      }
    }
  }

  std::vector<double> estimate() const {
    std::vector<double> out(num_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = num_[i] / den_[i];
    return out;
  }

  Image weights() const {
    Image out(w_, h_);
    auto px = out.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) px[i] = static_cast<float>(den_[i]);
    return out;
  }

 private:
  int w_, h_;
  const Bm3dParams& params_;
  std::vector<double> num_, den_;
};

void check(const Image& noisy, double sigma, const Bm3dParams& p) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("bm3d: sigma must be > 0");
  if (p.block < 2 || p.step < 1 || p.step > p.block || p.search_radius < 0) {
    throw std::invalid_argument("bm3d: invalid block/step/search parameters");
  }
  const int mg = p.max_group;
  if (mg != 1 && mg != 2 && mg != 4 && mg != 8 && mg != 16) {
    throw std::invalid_argument("bm3d: max_group must be one of 1, 2, 4, 8, 16");
  }
  if (noisy.width() < 2 * p.block || noisy.height() < 2 * p.block) {
    throw std::invalid_argument("bm3d: image smaller than twice the block size");
  }
}

Image to_image(const std::vector<double>& plane, int w, int h, bool clip) {
  Image out(w, h);
  auto px = out.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = static_cast<float>(plane[i]);
  if (clip) out.clip();
  return out;
}

}  // namespace

Bm3dResult bm3d_stages(const Image& noisy, double sigma, const Bm3dParams& params) {
  check(noisy, sigma, params);
  const int w = noisy.width();
  const int h = noisy.height();
  const int n = params.block;
  const std::size_t area = static_cast<std::size_t>(n) * n;
  const double sigma2 = sigma * sigma;
  const auto xs = grid_positions(w, n, params.step);
  const auto ys = grid_positions(h, n, params.step);

  std::vector<double> noisy_plane(noisy.pixels().begin(), noisy.pixels().end());
  BlockTransform dct(n);
  std::vector<double> group(area * static_cast<std::size_t>(params.max_group));
  std::vector<double> basic_group(group.size());

  // Stage 1: hard thresholding.
  Stage first(w, h, params);
  const double threshold = params.lambda_3d * sigma;
  for (int ry : ys) {
    for (int rx : xs) {
      const auto matches = first.match(noisy_plane, rx, ry, params.match_threshold_ht);
      const int count = static_cast<int>(matches.size());
      for (int g = 0; g < count; ++g) {
        dct.forward(noisy_plane, w, matches[g].x, matches[g].y, &group[g * area]);
      }
      haar_group(group, count, static_cast<int>(area), false);
      int retained = 1;
      for (std::size_t i = 1; i < static_cast<std::size_t>(count) * area; ++i) {
        if (std::abs(group[i]) < threshold) {
          group[i] = 0.0;
        } else {
          ++retained;
        }
      }
      haar_group(group, count, static_cast<int>(area), true);
      for (int g = 0; g < count; ++g) dct.inverse(&group[g * area]);
      first.aggregate(matches, group, 1.0 / (sigma2 * retained));
    }
  }
  const auto basic_plane = first.estimate();

  // Stage 2: empirical Wiener shrinkage guided by the basic estimate.
  Stage second(w, h, params);
  for (int ry : ys) {
    for (int rx : xs) {
      const auto matches = second.match(basic_plane, rx, ry, params.match_threshold_wie);
      const int count = static_cast<int>(matches.size());
      for (int g = 0; g < count; ++g) {
        dct.forward(noisy_plane, w, matches[g].x, matches[g].y, &group[g * area]);
        dct.forward(basic_plane, w, matches[g].x, matches[g].y, &basic_group[g * area]);
      }
      haar_group(group, count, static_cast<int>(area), false);
      haar_group(basic_group, count, static_cast<int>(area), false);
      double energy = 0.0;
      for (std::size_t i = 0; i < static_cast<std::size_t>(count) * area; ++i) {
        const double b2 = basic_group[i] * basic_group[i];
        const double shrink = b2 / (b2 + sigma2);
        group[i] *= shrink;
        energy += shrink * shrink;
      }
      haar_group(group, count, static_cast<int>(area), true);
      for (int g = 0; g < count; ++g) dct.inverse(&group[g * area]);
      second.aggregate(matches, group, energy > 0.0 ? 1.0 / (sigma2 * energy) : 1.0 / sigma2);
    }
  }

  return {to_image(basic_plane, w, h, false), to_image(second.estimate(), w, h, true),
          first.weights(), second.weights()};
}

}  // namespace dplab
