#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dplab/bm3d.hpp"
#include "dplab/classic.hpp"
#include "dplab/metrics.hpp"
#include "dplab/nlm.hpp"
#include "dplab/noise.hpp"
#include "dplab/phantom.hpp"
#include "dplab/sigma.hpp"
#include "dplab/wavelet.hpp"
#include "dplab/wiener.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace dplab;
using namespace dplab::test;

namespace {

struct NoisyPhantom {
  Image clean, noisy;
};

NoisyPhantom noisy_phantom(int size, std::uint64_t seed, double texture = 0.05) {
  NoisyPhantom p;
  p.clean = gen_phantom(PhantomSpec(size, 6, static_cast<float>(texture), seed));
  p.noisy = apply_noise(p.clean, NoiseSpec::defaults(NoiseFamily::Gaussian, seed + 1000));
  return p;
}

}  // namespace

TEST_CASE("haar transform is orthonormal with perfect reconstruction") {
  const Image img = test::random_image(32, 16, 1);
  std::vector<double> plane(img.pixels().begin(), img.pixels().end());
  const auto original = plane;
  haar_forward(plane, 32, 16, 3);
  double e0 = 0.0, e1 = 0.0;
  for (std::size_t i = 0; i < plane.size(); ++i) {
    e0 += original[i] * original[i];
    e1 += plane[i] * plane[i];
  }
  CHECK(e1 == doctest::Approx(e0).epsilon(1e-12));
  haar_inverse(plane, 32, 16, 3);
  double worst = 0.0;
  for (std::size_t i = 0; i < plane.size(); ++i) worst = std::max(worst, std::abs(plane[i] - original[i]));
  CHECK(worst < 1e-12);
}

TEST_CASE("wavelet shrinkage") {
  const Image flat(20, 20, 0.4f);
  CHECK(test::max_abs_diff(wavelet_denoise(flat, ShrinkMode::Bayes), flat) <= 1e-6);
  CHECK(test::max_abs_diff(wavelet_denoise(flat, ShrinkMode::Visu), flat) <= 1e-6);
  const Image img = test::random_image(37, 29, 2);
  CHECK(test::max_abs_diff(wavelet_denoise(img, ShrinkMode::Visu, 3, 0.0), img) <= 1e-6);
  CHECK(test::max_abs_diff(wavelet_denoise(img, ShrinkMode::Bayes, 3, 0.0), img) <= 1e-6);
  CHECK_THROWS_AS(wavelet_denoise(Image(6, 6), ShrinkMode::Bayes, 3), std::invalid_argument);

  const auto p = noisy_phantom(128, 3, 0.1);
  const Image b = wavelet_denoise(p.noisy, ShrinkMode::Bayes);
  const Image v = wavelet_denoise(p.noisy, ShrinkMode::Visu);
  CHECK(psnr(p.clean, b) > psnr(p.clean, p.noisy));
  CHECK(psnr(p.clean, v) > psnr(p.clean, p.noisy));
  CHECK(mse(p.clean, v) > mse(p.clean, b));
}

TEST_CASE("wiener filter") {
  const Image flat(16, 16, 0.7f);
  CHECK(test::max_abs_diff(wiener_filter(flat, 5, 0.1), flat) <= 1e-6);
  const Image img = test::random_image(16, 16, 4);
  CHECK(test::max_abs_diff(wiener_filter(img, 5, 0.0), img) <= 1e-6);
  CHECK_THROWS_AS(wiener_filter(img, 4), std::invalid_argument);
  const auto p = noisy_phantom(96, 5);
  CHECK(psnr(p.clean, wiener_filter(p.noisy)) > psnr(p.clean, p.noisy));
}

TEST_CASE("sigma estimation") {
  CHECK(estimate_sigma(Image(32, 32, 0.5f)).sigma == 0.0);
  Image noise(256, 256, 0.0f);
  Rng rng(6);
  for (float& v : noise.pixels()) v = static_cast<float>(std::sqrt(0.005) * rng.normal());
  const double s = estimate_sigma(noise).sigma;
  CHECK(s == doctest::Approx(std::sqrt(0.005)).epsilon(0.10));

  Image ramped = noise;
  for (int y = 0; y < 256; ++y) {
    for (int x = 0; x < 256; ++x) ramped(x, y) += static_cast<float>(0.5 * x / 255.0 + 0.2 * y / 255.0);
  }
  CHECK(std::abs(estimate_sigma(ramped).sigma - s) / s < 0.05);

  const double known = 0.02;
  CHECK(resolve_sigma(noise, &known).sigma == 0.02);
  CHECK(resolve_sigma(noise, &known).method == SigmaMethod::Known);
  CHECK(resolve_sigma(noise, nullptr).method == SigmaMethod::Mad);
}

TEST_CASE("nlm matches the direct definition") {
  for (std::uint64_t seed : {7u, 8u}) {
    const Image img = test::random_image(seed == 7 ? 48 : 23, seed == 7 ? 40 : 31, seed);
    NlmParams params;
    params.patch_radius = 2;
    params.search_radius = 5;
    params.sigma = 0.1;
    params.h = 0.15;
    CHECK(test::max_abs_diff(nlm(img, params), brute_nlm(img, 2, 5, 0.1, 0.15)) <= 1e-6);
  }
  SUBCASE("defaults and estimated sigma") {
    const auto p = noisy_phantom(40, 9);
    const auto strength = resolve_nlm_strength(p.noisy, {});
    CHECK(strength.h == doctest::Approx(0.8 * strength.sigma));
    CHECK(test::max_abs_diff(nlm(p.noisy), brute_nlm(p.noisy, 3, 10, strength.sigma, strength.h)) <= 1e-6);
  }
}

TEST_CASE("nlm behaviour") {
  const Image flat(20, 20, 0.3f);
  CHECK(test::max_abs_diff(nlm(flat), flat) <= 1e-6);

  // Two identical noisy halves: the twin position weighs as much as the pixel itself.
  const Image half = test::random_image(12, 24, 11);
  Image twin(24, 24);
  for (int y = 0; y < 24; ++y) {
    for (int x = 0; x < 12; ++x) twin(x, y) = twin(x + 12, y) = half(x, y);
  }
  NlmParams params;
  params.patch_radius = 2;
  params.search_radius = 12;
  params.sigma = 0.05;
  const Image weights = nlm_pixel_weights(twin, 5, 12, params);
  const float self = weights(12, 12);
  const float other = weights(12 + 12, 12);
  CHECK(self == doctest::Approx(1.0));
  CHECK(other > 0.9f * self);
  CHECK(weights(0, 0) == 0.0f);

  const Image noisy = test::random_image(16, 16, 12, 0.2f, 0.6f);
  const Image smoothed = nlm(noisy);
  for (float v : smoothed.pixels()) {
    CHECK(v >= 0.2f - 1e-6f);
    CHECK(v <= 0.6f + 1e-6f);
  }
}

TEST_CASE("bm3d") {
  SUBCASE("near-noiseless piecewise constant input is preserved") {
    const Image clean = gen_phantom(PhantomSpec(64, 3, 0.0f, 13));
    CHECK(test::max_abs_diff(bm3d(clean, 1e-6), clean) <= 1e-3);
  }
  SUBCASE("full coverage, determinism, improvement") {
    const auto p = noisy_phantom(64, 14);
    const auto r = bm3d_stages(p.noisy, std::sqrt(0.005));
    for (float v : r.basic_weight.pixels()) CHECK(v > 0.0f);
    for (float v : r.final_weight.pixels()) CHECK(v > 0.0f);
    CHECK(bm3d(p.noisy, std::sqrt(0.005)) == r.final);
    CHECK(psnr(p.clean, r.basic) > psnr(p.clean, p.noisy));
    CHECK(psnr(p.clean, r.final) > psnr(p.clean, p.noisy));
    for (float v : r.final.pixels()) {
      CHECK(v >= 0.0f);
      CHECK(v <= 1.0f);
    }
  }
  SUBCASE("odd sizes are covered") {
    const Image img = test::random_image(37, 29, 15);
    const auto r = bm3d_stages(img, 0.1);
    for (float v : r.final_weight.pixels()) CHECK(v > 0.0f);
  }
  SUBCASE("argument errors") {
    const Image img(32, 32, 0.5f);
    CHECK_THROWS_AS(bm3d(img, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(bm3d(img, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(bm3d(Image(12, 12), 0.1), std::invalid_argument);
    Bm3dParams bad;
    bad.max_group = 12;
    CHECK_THROWS_AS(bm3d(img, 0.1, bad), std::invalid_argument);
  }
}

TEST_CASE("classical registry") {
  const auto& names = classic_algorithms();
  CHECK(names.size() == 9);
  CHECK(is_classic_algorithm("bm3d"));
  CHECK_FALSE(is_classic_algorithm("noisy"));
  CHECK_THROWS_AS(run_classic("unknown", Image(16, 16)), std::invalid_argument);
  CHECK_THROWS_AS(run_classic("median", Image(16, 16), std::nullopt, {{"sigma_px", 1.0}}), std::invalid_argument);
  CHECK(run_classic("median", test::random_image(16, 16, 1), std::nullopt, {{"radius", 2.0}}) ==
        median_filter(test::random_image(16, 16, 1), 2));

  const Image flat(32, 32, 0.45f);
  const auto p = noisy_phantom(128, 16);
  const double noisy_psnr = psnr(p.clean, p.noisy);
  for (const auto& name : names) {
    CAPTURE(name);
    CHECK(test::max_abs_diff(run_classic(name, flat), flat) <= 1e-6);
    const Image out = run_classic(name, p.noisy);
    for (float v : out.pixels()) {
      REQUIRE(v >= 0.0f);
      REQUIRE(v <= 1.0f);
    }
    CHECK(psnr(p.clean, out) > noisy_psnr);
  }
}
