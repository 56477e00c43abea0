#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "dplab/noise.hpp"
#include "dplab/phantom.hpp"
#include "support.hpp"

using namespace dplab;

namespace {

struct Moments {
  double mean;
  double var;
  double n;
};

Moments diff_moments(const Image& out, const Image& in) {
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double d = static_cast<double>(out.data()[i]) - in.data()[i];
    s += d;
    s2 += d * d;
  }
  const double n = static_cast<double>(out.size());
  const double mean = s / n;
  return {mean, (s2 - n * mean * mean) / (n - 1.0), n};
}

void check_moments(const Moments& m, double mean, double var) {
  const double se_mean = std::sqrt(var / m.n);
  const double se_var = var * std::sqrt(2.0 / (m.n - 1.0));
  CHECK(std::abs(m.mean - mean) <= 3.0 * se_mean);
  CHECK(std::abs(m.var - var) <= 3.0 * se_var);
}

}  // namespace

TEST_CASE("noise family names") {
  CHECK(parse_noise_family("gaussian") == NoiseFamily::Gaussian);
  CHECK(parse_noise_family("awgn") == NoiseFamily::Awgn);
  CHECK(parse_noise_family("speckle") == NoiseFamily::Speckle);
  CHECK(to_string(NoiseFamily::Speckle) == "speckle");
  CHECK_THROWS_AS(parse_noise_family("poisson"), std::invalid_argument);
}

TEST_CASE("defaults follow the corruption table") {
  const auto g = std::get<GaussianParams>(NoiseSpec::defaults(NoiseFamily::Gaussian).params);
  CHECK(g.mean == 0.0);
  CHECK(g.var == 0.005);
  const auto a = std::get<AwgnParams>(NoiseSpec::defaults(NoiseFamily::Awgn).params);
  CHECK(a.loc == 0.01);
  CHECK(a.scale == 0.0001);
  const auto s = std::get<SpeckleParams>(NoiseSpec::defaults(NoiseFamily::Speckle).params);
  CHECK(s.mean == 0.1);
  CHECK(s.var == 0.01);
  CHECK(NoiseSpec::defaults(NoiseFamily::Gaussian).describe() == "mean=0;var=0.005");
  CHECK(NoiseSpec::defaults(NoiseFamily::Awgn).describe() == "loc=0.01;scale=0.0001");
}

TEST_CASE("set_param validates names and values") {
  auto spec = NoiseSpec::defaults(NoiseFamily::Gaussian);
  spec.set_param("var", 0.01);
  CHECK(std::get<GaussianParams>(spec.params).var == 0.01);
  CHECK_THROWS_AS(spec.set_param("loc", 0.1), std::invalid_argument);
  CHECK_THROWS_AS(spec.set_param("var", -1.0), std::invalid_argument);
  auto awgn = NoiseSpec::defaults(NoiseFamily::Awgn);
  CHECK_THROWS_AS(awgn.set_param("scale", -0.1), std::invalid_argument);
}

TEST_CASE("gaussian noise") {
  const Image x = gen_phantom(PhantomSpec(64, 4, 0.05f, 1));
  SUBCASE("zero variance adds the mean") {
    Rng rng(1);
    CHECK(add_gaussian(x, 0.0, 0.0, rng) == x);
    Image expect = x;
    for (float& v : expect.pixels()) v += 0.1f;
    expect.clip();
    CHECK(test::max_abs_diff(add_gaussian(x, 0.1, 0.0, rng), expect) < 1e-7);
  }
  SUBCASE("deterministic under a seed") {
    Rng a(9), b(9);
    CHECK(add_gaussian(x, 0.0, 0.005, a) == add_gaussian(x, 0.0, 0.005, b));
    const auto spec = NoiseSpec::defaults(NoiseFamily::Gaussian, 77);
    CHECK(apply_noise(x, spec) == apply_noise(x, spec));
  }
  SUBCASE("clip flag") {
    Rng a(2), b(2);
    const Image clipped_out = add_gaussian(x, 0.0, 0.05, a, true);
    const Image raw = add_gaussian(x, 0.0, 0.05, b, false);
    bool outside = false;
    for (float v : raw.pixels()) outside |= v < 0.0f || v > 1.0f;
    CHECK(outside);
    CHECK(clipped(raw) == clipped_out);
  }
  SUBCASE("moments on a constant image") {
    const Image c(512, 512, 0.5f);
    Rng rng(123);
    check_moments(diff_moments(add_gaussian(c, 0.0, 0.005, rng, false), c), 0.0, 0.005);
  }
}

TEST_CASE("awgn noise") {
  const Image x = gen_phantom(PhantomSpec(64, 4, 0.05f, 2));
  SUBCASE("zero scale is plain gaussian") {
    Rng a(4), b(4);
    CHECK(add_awgn(x, 0.01, 0.0, a) == add_gaussian(x, 0.0, 0.01, b));
  }
  SUBCASE("zero loc and scale is identity") {
    Rng a(4);
    CHECK(add_awgn(x, 0.0, 0.0, a) == x);
  }
  SUBCASE("variance draws are clamped at zero") {
    Rng rng(8);
    for (int i = 0; i < 200; ++i) CHECK(sample_awgn_variance(-0.5, 0.1, rng) >= 0.0);
  }
  SUBCASE("per-image variances average to loc") {
    const int n = 1000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      Rng rng(1000 + static_cast<std::uint64_t>(i));
      s += sample_awgn_variance(0.01, 0.0001, rng);
    }
    CHECK(std::abs(s / n - 0.01) <= 3.0 * 0.0001 / std::sqrt(static_cast<double>(n)));
  }
  SUBCASE("moments on a constant image") {
    const Image c(512, 512, 0.5f);
    Rng rng(31);
    const Image out = add_awgn(c, 0.01, 0.0001, rng, false);
    Rng replay(31);
    const double var = sample_awgn_variance(0.01, 0.0001, replay);
    check_moments(diff_moments(out, c), 0.0, var);
  }
}

TEST_CASE("speckle noise") {
  SUBCASE("zero image stays zero") {
    const Image z(32, 32, 0.0f);
    Rng rng(5);
    CHECK(add_speckle(z, 0.1, 0.5, rng) == z);
  }
  SUBCASE("zero variance scales by 1 + mean") {
    const Image x = gen_phantom(PhantomSpec(64, 4, 0.05f, 3));
    Rng rng(5);
    Image expect = x;
    for (float& v : expect.pixels()) v = v + v * 0.1f;
    expect.clip();
    CHECK(test::max_abs_diff(add_speckle(x, 0.1, 0.0, rng), expect) < 1e-7);
  }
  SUBCASE("moments on a constant image") {
    const Image c(512, 512, 0.5f);
    Rng rng(77);
    check_moments(diff_moments(add_speckle(c, 0.1, 0.01, rng, false), c), 0.05, 0.0025);
  }
}
