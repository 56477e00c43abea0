#pragma once

#include <optional>

#include "dplab/image.hpp"

namespace dplab {

/// Local-adaptive Wiener filter: mu + max(var - nu2, 0) / max(var, nu2) * (x - mu),
/// with mu and var over a window x window neighborhood and nu2 = sigma^2
/// (MAD-estimated when sigma is absent). Throws std::invalid_argument unless
/// the window is odd and >= 3.
Image wiener_filter(const Image& image, int window = 5, std::optional<double> sigma = std::nullopt);

}  // namespace dplab
