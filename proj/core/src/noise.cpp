#include "dplab/noise.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dplab {

namespace {

void check_nonnegative(double v, const char* what) {
  if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + " must be >= 0");
}

template <typename Fn>
Image map_with_field(const Image& image, const std::vector<double>& field, bool clip, Fn fn) {
  Image out = image;
  auto px = out.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    px[i] = static_cast<float>(fn(static_cast<double>(px[i]), field[i]));
  }
  if (clip) out.clip();
  return out;
}

}  // namespace

std::string_view to_string(NoiseFamily family) noexcept {
  switch (family) {
    case NoiseFamily::Gaussian: return "gaussian";
    case NoiseFamily::Awgn: return "awgn";
    case NoiseFamily::Speckle: return "speckle";
  }
  return "unknown";
}

NoiseFamily parse_noise_family(std::string_view name) {
  if (name == "gaussian") return NoiseFamily::Gaussian;
  if (name == "awgn") return NoiseFamily::Awgn;
  if (name == "speckle") return NoiseFamily::Speckle;
  throw std::invalid_argument("unknown noise family '" + std::string(name) +
                              "' (expected gaussian, awgn or speckle)");
}

NoiseFamily NoiseSpec::family() const noexcept {
  return static_cast<NoiseFamily>(params.index());
}

NoiseSpec NoiseSpec::defaults(NoiseFamily family, std::uint64_t seed) {
  NoiseSpec spec;
  spec.seed = seed;
  switch (family) {
    case NoiseFamily::Gaussian: spec.params = GaussianParams{}; break;
    case NoiseFamily::Awgn: spec.params = AwgnParams{}; break;
    case NoiseFamily::Speckle: spec.params = SpeckleParams{}; break;
  }
  return spec;
}

void NoiseSpec::set_param(std::string_view key, double value) {
  auto fail = [&] {
    throw std::invalid_argument("parameter '" + std::string(key) + "' does not apply to " +
                                std::string(to_string(family())) + " noise");
  };
  std::visit(
      [&](auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, AwgnParams>) {
          if (key == "loc") {
            p.loc = value;
          } else if (key == "scale") {
            check_nonnegative(value, "scale");
            p.scale = value;
          } else {
            fail();
          }
        } else {
          if (key == "mean") {
            p.mean = value;
          } else if (key == "var") {
            check_nonnegative(value, "var");
            p.var = value;
          } else {
            fail();
          }
        }
      },
      params);
}

std::string NoiseSpec::describe() const {
  std::ostringstream os;
  os.precision(10);
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, AwgnParams>) {
          os << "loc=" << p.loc << ";scale=" << p.scale;
        } else {
          os << "mean=" << p.mean << ";var=" << p.var;
        }
      },
      params);
  return os.str();
}

std::vector<double> gaussian_field(std::size_t n, double mean, double var, Rng& rng) {
  check_nonnegative(var, "var");
  const double stddev = std::sqrt(var);
  std::vector<double> field(n);
  for (auto& v : field) v = rng.normal(mean, stddev);
  return field;
}

Image add_gaussian(const Image& image, double mean, double var, Rng& rng, bool clip) {
  const auto field = gaussian_field(image.size(), mean, var, rng);
  return map_with_field(image, field, clip, [](double x, double n) { return x + n; });
}

double sample_awgn_variance(double loc, double scale, Rng& rng) {
  check_nonnegative(scale, "scale");
  const double var = scale == 0.0 ? loc : rng.normal(loc, scale);
  return std::max(var, 0.0);
}

Image add_awgn(const Image& image, double loc, double scale, Rng& rng, bool clip) {
  const double var = sample_awgn_variance(loc, scale, rng);
  return add_gaussian(image, 0.0, var, rng, clip);
}

Image add_speckle(const Image& image, double mean, double var, Rng& rng, bool clip) {
  const auto field = gaussian_field(image.size(), mean, var, rng);
  return map_with_field(image, field, clip, [](double x, double n) { return x + x * n; });
}

Image apply_noise(const Image& image, const NoiseSpec& spec) {
  Rng rng(spec.seed);
  return std::visit(
      [&](const auto& p) -> Image {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, GaussianParams>) {
          return add_gaussian(image, p.mean, p.var, rng, spec.clip);
        } else if constexpr (std::is_same_v<P, AwgnParams>) {
          return add_awgn(image, p.loc, p.scale, rng, spec.clip);
        } else {
          return add_speckle(image, p.mean, p.var, rng, spec.clip);
        }
      },
      spec.params);
}

}  // namespace dplab
