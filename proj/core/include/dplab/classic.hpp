#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dplab/bm3d.hpp"
#include "dplab/filters.hpp"
#include "dplab/image.hpp"
#include "dplab/nlm.hpp"
#include "dplab/sigma.hpp"
#include "dplab/wavelet.hpp"
#include "dplab/wiener.hpp"

namespace dplab {

/// Registered classical denoisers:
/// mean, median, gaussian, bilateral, wavelet_b, wavelet_v, wiener, nlm, bm3d.
const std::vector<std::string>& classic_algorithms();
bool is_classic_algorithm(std::string_view name);

/// Parameter keys accepted by an algorithm's overrides.
std::vector<std::string> classic_param_keys(std::string_view name);

using ParamOverrides = std::map<std::string, double, std::less<>>;

/// Runs a registered filter with its defaults, applying `overrides`
/// (e.g. {"radius", 2}) and the noise level `sigma` where the filter uses one
/// (MAD-estimated when absent). Output is clipped to [0, 1].
/// Throws std::invalid_argument for unknown names or parameter keys.
Image run_classic(std::string_view name, const Image& image,
                  std::optional<double> sigma = std::nullopt,
                  const ParamOverrides& overrides = {});

}  // namespace dplab
