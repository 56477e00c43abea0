#include "dplab/classic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dplab {

namespace {

// Floor applied when an estimated noise level is zero and the filter needs sigma > 0.
constexpr double kSigmaFloor = 1e-6;

struct Entry {
  std::string name;
  std::vector<std::string> keys;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = {
      {"mean", {"radius"}},
      {"median", {"radius"}},
      {"gaussian", {"sigma_px"}},
      {"bilateral", {"sigma_spatial", "sigma_range"}},
      {"wavelet_b", {"levels"}},
      {"wavelet_v", {"levels"}},
      {"wiener", {"window"}},
      {"nlm", {"patch_radius", "search_radius", "h", "h_factor"}},
      {"bm3d",
       {"block", "step", "search_radius", "max_group", "match_threshold_ht",
        "match_threshold_wie", "lambda_3d"}},
  };
  return entries;
}

const Entry& lookup(std::string_view name) {
  for (const auto& e : registry()) {
    if (e.name == name) return e;
  }
  std::string valid;
  for (const auto& e : registry()) valid += (valid.empty() ? "" : ", ") + e.name;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "' (valid: " + valid + ")");
}

class Params {
 public:
  Params(const Entry& entry, const ParamOverrides& overrides) : overrides_(overrides) {
    for (const auto& [key, value] : overrides) {
      if (std::find(entry.keys.begin(), entry.keys.end(), key) == entry.keys.end()) {
        throw std::invalid_argument("parameter '" + key + "' does not apply to " + entry.name);
      }
    }
  }

  double real(const char* key, double fallback) const {
    const auto it = overrides_.find(key);
    return it == overrides_.end() ? fallback : it->second;
  }

  int integer(const char* key, int fallback) const {
    const double v = real(key, fallback);
    if (v != std::floor(v)) throw std::invalid_argument(std::string(key) + " must be an integer");
    return static_cast<int>(v);
  }

  bool has(const char* key) const { return overrides_.contains(key); }

 private:
  const ParamOverrides& overrides_;
};

}  // namespace

const std::vector<std::string>& classic_algorithms() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : registry()) out.push_back(e.name);
    return out;
  }();
  return names;
}

bool is_classic_algorithm(std::string_view name) {
  const auto& names = classic_algorithms();
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::vector<std::string> classic_param_keys(std::string_view name) { return lookup(name).keys; }

Image run_classic(std::string_view name, const Image& image, std::optional<double> sigma,
                  const ParamOverrides& overrides) {
  const Entry& entry = lookup(name);
  const Params p(entry, overrides);
  const FilterParams d;
  Image out;
  if (name == "mean") {
    out = mean_filter(image, p.integer("radius", d.kernel_radius));
  } else if (name == "median") {
    out = median_filter(image, p.integer("radius", d.kernel_radius));
  } else if (name == "gaussian") {
    out = gaussian_filter(image, p.real("sigma_px", d.gaussian_sigma));
  } else if (name == "bilateral") {
    out = bilateral_filter(image, p.real("sigma_spatial", d.bilateral_sigma_spatial),
                           p.real("sigma_range", d.bilateral_sigma_range));
  } else if (name == "wavelet_b" || name == "wavelet_v") {
    out = wavelet_denoise(image, name == "wavelet_b" ? ShrinkMode::Bayes : ShrinkMode::Visu,
                          p.integer("levels", 3), sigma);
  } else if (name == "wiener") {
    out = wiener_filter(image, p.integer("window", d.wiener_window), sigma);
  } else if (name == "nlm") {
    NlmParams np;
    np.patch_radius = p.integer("patch_radius", d.nlm_patch_radius);
    np.search_radius = p.integer("search_radius", d.nlm_search_radius);
    np.h_factor = p.real("h_factor", d.nlm_h_factor);
    if (p.has("h")) np.h = p.real("h", 0.0);
    np.sigma = sigma;
    out = nlm(image, np);
  } else {
    Bm3dParams bp;
    bp.block = p.integer("block", bp.block);
    bp.step = p.integer("step", bp.step);
    bp.search_radius = p.integer("search_radius", bp.search_radius);
    bp.max_group = p.integer("max_group", bp.max_group);
    bp.match_threshold_ht = p.real("match_threshold_ht", bp.match_threshold_ht);
    bp.match_threshold_wie = p.real("match_threshold_wie", bp.match_threshold_wie);
    bp.lambda_3d = p.real("lambda_3d", bp.lambda_3d);
    const double s = sigma ? *sigma : estimate_sigma(image).sigma;
    out = bm3d(image, std::max(s, kSigmaFloor), bp);
  }
  out.clip();
  return out;
}

}  // namespace dplab
