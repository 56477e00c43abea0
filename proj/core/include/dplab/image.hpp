#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dplab {

/// Single-channel raster with row-major float intensities, nominally in [0, 1].
class Image {
 public:
  static constexpr int kMaxSide = 8192;

  Image() = default;
  /// Throws std::invalid_argument unless 1 <= width, height <= kMaxSide.
  Image(int width, int height, float fill = 0.0f);
  Image(int width, int height, std::vector<float> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  float& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
  float operator()(int x, int y) const noexcept { return data_[index(x, y)]; }

  std::span<float> pixels() noexcept { return data_; }
  std::span<const float> pixels() const noexcept { return data_; }
  const std::vector<float>& data() const noexcept { return data_; }

  bool same_shape(const Image& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  /// Clamp every value into [0, 1] in place.
  Image& clip() noexcept;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

Image clipped(Image image);

/// Symmetric boundary index without edge repeat (-1 -> 1, n -> n - 2).
int reflect_index(int i, int n) noexcept;

/// Throws std::invalid_argument when the images differ in shape.
void require_same_shape(const Image& a, const Image& b, const char* what);

}  // namespace dplab
