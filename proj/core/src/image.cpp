#include "dplab/image.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dplab {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1 || width > Image::kMaxSide ||
      height > Image::kMaxSide) {
    throw std::invalid_argument("image dimensions out of range: " +
                                std::to_string(width) + "x" +
                                std::to_string(height));
  }
}

}  // namespace

Image::Image(int width, int height, float fill) : width_(width), height_(height) {
  check_dims(width, height);
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
               fill);
}

Image::Image(int width, int height, std::vector<float> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dims(width, height);
  if (data_.size() !=
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("image data length does not match dimensions");
  }
}

Image& Image::clip() noexcept {
  for (float& v : data_) v = std::clamp(v, 0.0f, 1.0f);
  return *this;
}

Image clipped(Image image) {
  image.clip();
  return image;
}

int reflect_index(int i, int n) noexcept {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument(std::string(what) + ": image dimensions differ (" +
                                std::to_string(a.width()) + "x" +
                                std::to_string(a.height()) + " vs " +
                                std::to_string(b.width()) + "x" +
                                std::to_string(b.height()) + ")");
  }
}

}  // namespace dplab
