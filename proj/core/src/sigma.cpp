#include "dplab/sigma.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dplab {

SigmaEstimate estimate_sigma(const Image& image) {
  const int hw = image.width() / 2;
  const int hh = image.height() / 2;
  if (hw < 1 || hh < 1) throw std::invalid_argument("estimate_sigma: image smaller than 2x2");
  std::vector<double> diag;
  diag.reserve(static_cast<std::size_t>(hw) * hh);
  for (int y = 0; y < hh; ++y) {
    for (int x = 0; x < hw; ++x) {
      const double a = image(2 * x, 2 * y);
      const double b = image(2 * x + 1, 2 * y);
      const double c = image(2 * x, 2 * y + 1);
      const double d = image(2 * x + 1, 2 * y + 1);
      diag.push_back(std::abs(a - b - c + d) / 2.0);
    }
  }
  const auto mid = diag.begin() + static_cast<std::ptrdiff_t>(diag.size() / 2);
  std::nth_element(diag.begin(), mid, diag.end());
  double median = *mid;
  if (diag.size() % 2 == 0) {
    median = (median + *std::max_element(diag.begin(), mid)) / 2.0;
  }
  return {median / 0.6745, SigmaMethod::Mad};
}

SigmaEstimate resolve_sigma(const Image& image, const double* known) {
  if (known != nullptr) {
    if (!(*known >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
    return {*known, SigmaMethod::Known};
  }
  return estimate_sigma(image);
}

}  // namespace dplab
