#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "dplab/errors.hpp"
#include "dplab/nn/adam.hpp"
#include "dplab/nn/checkpoint.hpp"
#include "dplab/nn/ops.hpp"
#include "dplab/nn/unet.hpp"
#include "gradcheck.hpp"
#include "support.hpp"

using namespace dplab;
using namespace dplab::nn;
using test::TensorD;

namespace {

TensorD target_like(const TensorD& t, std::uint64_t seed) {
  Rng rng(seed);
  return test::random_tensor(t.shape(), rng, 1.0, false);
}

}  // namespace

TEST_CASE("tensor basics") {
  auto t = TensorD::from({1, 1, 1, 3}, {1.0, 2.0, 3.0});
  CHECK(t.numel() == 3);
  CHECK(t.shape() == Shape{1, 1, 1, 3});
  CHECK_THROWS_AS(TensorD::from({1, 1, 2, 2}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(backward(t), std::invalid_argument);
  CHECK_THROWS_AS(t.item(), std::invalid_argument);
  CHECK(TensorD::scalar(2.5).item() == 2.5);
  const auto d = t.detach();
  CHECK_FALSE(d.requires_grad());
  CHECK(std::vector<double>(d.data().begin(), d.data().end()) == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("conv2d hand cases") {
  Rng rng(1);
  const auto x = test::random_tensor({1, 1, 5, 6}, rng, 1.0, false);
  auto identity = TensorD::zeros({1, 1, 3, 3});
  identity.data()[4] = 1.0;
  const auto y = conv2d(x, identity, TensorD::zeros({1, 1, 1, 1}));
  CHECK(std::equal(y.data().begin(), y.data().end(), x.data().begin()));

  std::vector<double> ones(9, 1.0);
  const auto box = conv2d(x, TensorD::from({1, 1, 3, 3}, ones), TensorD::zeros({1, 1, 1, 1}));
  double s = 0.0;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) s += x.data()[static_cast<std::size_t>((2 + dy) * 6 + (3 + dx))];
  }
  CHECK(box.data()[2 * 6 + 3] == doctest::Approx(s).epsilon(1e-14));
  // Corner sees zero padding.
  CHECK(box.data()[0] == doctest::Approx(x.data()[0] + x.data()[1] + x.data()[6] + x.data()[7]).epsilon(1e-14));

  CHECK_THROWS_AS(conv2d(x, TensorD::zeros({1, 2, 3, 3}), TensorD::zeros({1, 1, 1, 1})), std::invalid_argument);
  CHECK_THROWS_AS(conv2d(x, identity, TensorD::zeros({1, 2, 1, 1})), std::invalid_argument);
}

TEST_CASE("relu and maxpool hand cases") {
  auto x = TensorD::from({1, 1, 1, 2}, {-1.0, 2.0}, true);
  backward(sum(relu(x)));
  CHECK(relu(x).data()[0] == 0.0);
  CHECK(relu(x).data()[1] == 2.0);
  CHECK(x.grad()[0] == 0.0);
  CHECK(x.grad()[1] == 1.0);
  auto z = TensorD::from({1, 1, 1, 1}, {0.0}, true);
  backward(sum(relu(z)));
  CHECK(z.grad()[0] == 0.0);

  auto p = TensorD::from({1, 1, 2, 2}, {0.1, 0.9, 0.3, 0.2}, true);
  const auto m = maxpool2(p);
  CHECK(m.data()[0] == 0.9);
  backward(sum(m));
  CHECK(std::vector<double>(p.grad().begin(), p.grad().end()) == std::vector<double>{0.0, 1.0, 0.0, 0.0});

  auto tie = TensorD::from({1, 1, 2, 2}, {0.5, 0.5, 0.5, 0.5}, true);
  backward(sum(maxpool2(tie)));
  CHECK(std::vector<double>(tie.grad().begin(), tie.grad().end()) == std::vector<double>{1.0, 0.0, 0.0, 0.0});
  CHECK_THROWS_AS(maxpool2(TensorD::zeros({1, 1, 3, 4})), std::invalid_argument);
}

TEST_CASE("finite-difference gradients of every op") {
  Rng rng(7);
  SUBCASE("conv2d") {
    auto x = test::random_tensor({2, 3, 8, 8}, rng);
    auto w = test::random_tensor({4, 3, 3, 3}, rng, 0.3);
    auto b = test::random_tensor({1, 4, 1, 1}, rng);
    const auto t = target_like(conv2d(x, w, b), 1);
    CHECK(test::gradient_error([&] { return mse_loss(conv2d(x, w, b), t); }, {x, w, b}) < 1e-4);
  }
  SUBCASE("conv2d without padding, stride 2") {
    auto x = test::random_tensor({1, 2, 9, 9}, rng);
    auto w = test::random_tensor({3, 2, 3, 3}, rng, 0.3);
    auto b = test::random_tensor({1, 3, 1, 1}, rng);
    const auto t = target_like(conv2d(x, w, b, 2, 0), 2);
    CHECK(test::gradient_error([&] { return mse_loss(conv2d(x, w, b, 2, 0), t); }, {x, w, b}) < 1e-4);
  }
  SUBCASE("conv1x1") {
    auto x = test::random_tensor({2, 5, 4, 4}, rng);
    auto w = test::random_tensor({2, 5, 1, 1}, rng);
    auto b = test::random_tensor({1, 2, 1, 1}, rng);
    const auto t = target_like(conv1x1(x, w, b), 3);
    CHECK(test::gradient_error([&] { return mse_loss(conv1x1(x, w, b), t); }, {x, w, b}) < 1e-4);
  }
  SUBCASE("upconv2") {
    auto x = test::random_tensor({2, 4, 3, 5}, rng);
    auto w = test::random_tensor({4, 3, 2, 2}, rng);
    auto b = test::random_tensor({1, 3, 1, 1}, rng);
    const auto y = upconv2(x, w, b);
    CHECK(y.shape() == Shape{2, 3, 6, 10});
    const auto t = target_like(y, 4);
    CHECK(test::gradient_error([&] { return mse_loss(upconv2(x, w, b), t); }, {x, w, b}) < 1e-4);
  }
  SUBCASE("relu") {
    auto x = test::away_from_zero({2, 2, 4, 4}, rng, 0.01, 1.0);
    const auto t = target_like(x, 5);
    CHECK(test::gradient_error([&] { return mse_loss(relu(x), t); }, {x}) < 1e-4);
  }
  SUBCASE("maxpool2") {
    // Distinct values 0.01 apart keep every argmax stable under the probe step.
    std::vector<double> v(2 * 3 * 6 * 4);
    std::iota(v.begin(), v.end(), 0.0);
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
    for (auto& e : v) e *= 0.01;
    auto x = TensorD::from({2, 3, 6, 4}, v, true);
    const auto t = target_like(maxpool2(x), 6);
    CHECK(test::gradient_error([&] { return mse_loss(maxpool2(x), t); }, {x}) < 1e-4);
  }
  SUBCASE("concat, add, sub, sum") {
    auto a = test::random_tensor({2, 1, 3, 3}, rng);
    auto b = test::random_tensor({2, 2, 3, 3}, rng);
    auto c = test::random_tensor({2, 3, 3, 3}, rng);
    const auto t = target_like(c, 7);
    CHECK(test::gradient_error([&] { return mse_loss(sub(add(concat_channels(a, b), c), t), c); }, {a, b, c}) <
          1e-4);
    CHECK(test::gradient_error([&] { return sum(sub(concat_channels(a, b), c)); }, {a, b, c}) < 1e-4);
  }
}

TEST_CASE("backward topology") {
  SUBCASE("fan-out accumulates") {
    auto x = TensorD::from({1, 1, 1, 1}, {3.0}, true);
    backward(sum(add(x, x)));
    CHECK(x.grad()[0] == 2.0);
  }
  SUBCASE("diamond graph reads fully accumulated gradients") {
    auto x = TensorD::from({1, 1, 1, 2}, {0.5, -1.5}, true);
    const auto a = relu(x);
    const auto b = add(a, x);
    const auto c = sub(a, b);
    const auto d = add(b, c);  // = a
    backward(mse_loss(add(d, a), TensorD::zeros({1, 1, 1, 2})));
    // loss = mean((2 relu(x))^2); d/dx = 4 relu(x) * relu'(x).
    CHECK(x.grad()[0] == doctest::Approx(4.0 * 0.5).epsilon(1e-14));
    CHECK(x.grad()[1] == 0.0);
  }
  SUBCASE("second backward doubles leaf gradients") {
    Rng rng(3);
    auto w = test::random_tensor({2, 1, 3, 3}, rng);
    const auto x = test::random_tensor({1, 1, 4, 4}, rng, 1.0, false);
    const auto b = TensorD::zeros({1, 2, 1, 1});
    const auto loss = sum(conv2d(x, w, b));
    backward(loss);
    const std::vector<double> once(w.grad().begin(), w.grad().end());
    backward(loss);
    for (std::size_t i = 0; i < once.size(); ++i) CHECK(w.grad()[i] == 2.0 * once[i]);
  }
}

TEST_CASE("adam") {
  SUBCASE("first step moves theta by about lr") {
    std::vector<Parameter<double>> params{{"theta", TensorD::from({1, 1, 1, 1}, {1.0}, true)}};
    backward(sum(add(mse_loss(params[0].value, TensorD::zeros({1, 1, 1, 1})), TensorD::scalar(0.0))));
    CHECK(params[0].value.grad()[0] == 2.0);
    AdamState<double> state;
    adam_step(params, state);
    CHECK(state.step == 1);
    CHECK(params[0].value.data()[0] == doctest::Approx(1.0 - 1e-4).epsilon(1e-9));
  }
  SUBCASE("hand trace of two steps") {
    std::vector<Parameter<double>> params{{"p", TensorD::from({1, 1, 1, 2}, {0.5, -0.25}, true)}};
    AdamState<double> state;
    state.config.lr = 0.01;
    const double g1[2] = {0.3, -2.0}, g2[2] = {-0.1, 0.5};
    double theta[2] = {0.5, -0.25}, m[2] = {0, 0}, v[2] = {0, 0};
    int t = 0;
    for (const double* g : {g1, g2}) {
      params[0].value.grad()[0] = g[0];
      params[0].value.grad()[1] = g[1];
      adam_step(params, state);
      ++t;
      for (int i = 0; i < 2; ++i) {
        m[i] = 0.9 * m[i] + 0.1 * g[i];
        v[i] = 0.999 * v[i] + 0.001 * g[i] * g[i];
        const double mh = m[i] / (1 - std::pow(0.9, t));
        const double vh = v[i] / (1 - std::pow(0.999, t));
        theta[i] -= 0.01 * mh / (std::sqrt(vh) + 1e-8);
        CHECK(params[0].value.data()[i] == doctest::Approx(theta[i]).epsilon(1e-12));
      }
    }
  }
  SUBCASE("zero gradient leaves parameters unchanged") {
    std::vector<Parameter<double>> params{{"p", TensorD::from({1, 1, 1, 3}, {0.1, 0.2, 0.3}, true)}};
    params[0].value.grad();
    AdamState<double> state;
    for (int i = 0; i < 3; ++i) adam_step(params, state);
    CHECK(std::vector<double>(params[0].value.data().begin(), params[0].value.data().end()) ==
          std::vector<double>{0.1, 0.2, 0.3});
  }
}

TEST_CASE("unet structure") {
  for (int depth : {1, 2, 3}) {
    for (int size : {32, 64}) {
      UNet<float> net({1, depth, 4, 1});
      net.init_weights(1);
      const auto y = net.forward(Tensor<float>::zeros({2, 1, size, size}));
      CHECK(y.shape() == Shape{2, 1, size, size});
    }
  }
  UNet<double> zero({2, 2, 4, 1});
  Rng rng(2);
  const auto y = zero.forward(test::random_tensor({1, 2, 16, 16}, rng, 1.0, false));
  for (double v : y.data()) CHECK(v == 0.0);
  CHECK_THROWS_AS(zero.forward(TensorD::zeros({1, 2, 18, 16})), std::invalid_argument);
  CHECK_THROWS_AS(zero.forward(TensorD::zeros({1, 1, 16, 16})), std::invalid_argument);
  CHECK_THROWS_AS(UNet<float>({3, 2, 4, 1}), std::invalid_argument);
  CHECK_THROWS_AS(UNet<float>({1, 2, 4, 2}), std::invalid_argument);
  CHECK(UNetConfig{1, 2, 16, 1}.accepts(64, 32));
  CHECK_FALSE(UNetConfig{1, 2, 16, 1}.accepts(66, 32));
}

TEST_CASE("unet initialization") {
  UNet<double> a({1, 2, 16, 1}), b({1, 2, 16, 1});
  a.init_weights(5);
  b.init_weights(5);
  for (std::size_t i = 0; i < a.parameters().size(); ++i) {
    const auto& pa = a.parameters()[i];
    const auto& pb = b.parameters()[i];
    CHECK(std::equal(pa.value.data().begin(), pa.value.data().end(), pb.value.data().begin()));
    if (pa.name.ends_with(".bias")) {
      for (double v : pa.value.data()) CHECK(v == 0.0);
    }
    if (pa.name == "enc0.conv2.weight") {
      REQUIRE(pa.value.shape() == Shape{16, 16, 3, 3});
      double s2 = 0.0;
      for (double v : pa.value.data()) s2 += v * v;
      const double stddev = std::sqrt(s2 / static_cast<double>(pa.value.numel()));
      CHECK(std::abs(stddev - std::sqrt(2.0 / 144.0)) / std::sqrt(2.0 / 144.0) < 0.10);
    }
    if (pa.name == "head.weight") CHECK(pa.value.shape() == Shape{1, 16, 1, 1});
  }
  b.init_weights(6);
  CHECK_FALSE(std::equal(a.parameters()[0].value.data().begin(), a.parameters()[0].value.data().end(),
                         b.parameters()[0].value.data().begin()));
}

TEST_CASE("unet end-to-end gradient") {
  UNet<double> net({1, 1, 4, 1});
  net.init_weights(9);
  Rng rng(10);
  const auto x = test::random_tensor({1, 1, 16, 16}, rng, 1.0, false);
  std::vector<TensorD> params;
  for (auto& p : net.parameters()) params.push_back(p.value);
  CHECK(test::gradient_error([&] { return sum(net.forward(x)); }, params, 1e-6, 3, 1e-6) < 1e-3);
}

TEST_CASE("forward is deterministic") {
  UNet<float> net({1, 2, 8, 1});
  net.init_weights(3);
  Rng rng(4);
  std::vector<float> v(2 * 32 * 32);
  for (auto& e : v) e = static_cast<float>(rng.uniform());
  const auto x = Tensor<float>::from({2, 1, 32, 32}, v);
  const auto a = net.forward(x);
  const auto b = net.forward(x);
  CHECK(std::equal(a.data().begin(), a.data().end(), b.data().begin()));
}

TEST_CASE("checkpoint round trip and errors") {
  test::TempDir dir("ckpt");
  UNet<float> net({2, 2, 4, 1});
  net.init_weights(11);
  std::vector<CheckpointEntry> entries;
  append_entries(entries, "fusion.", net.parameters());
  CHECK(entries.front().name == "fusion.enc0.conv1.weight");
  CHECK(entries.front().dims == std::vector<std::uint32_t>{4, 2, 3, 3});
  save_checkpoint(dir / "a.dplw", entries);

  const auto loaded = load_checkpoint(dir / "a.dplw");
  REQUIRE(loaded.size() == entries.size());
  UNet<float> other({2, 2, 4, 1});
  restore_entries(loaded, "fusion.", other.parameters());
  for (std::size_t i = 0; i < net.parameters().size(); ++i) {
    const auto& pa = net.parameters()[i].value;
    const auto& pb = other.parameters()[i].value;
    CHECK(std::equal(pa.data().begin(), pa.data().end(), pb.data().begin()));
  }

  std::ifstream in(dir / "a.dplw", std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), {});
  CHECK(bytes.substr(0, 5) == std::string("DPLW\x01", 5));

  UNet<float> wrong({2, 2, 8, 1});
  CHECK_THROWS_AS(restore_entries(loaded, "fusion.", wrong.parameters()), FormatError);
  CHECK_THROWS_AS(restore_entries(loaded, "noise.", other.parameters()), FormatError);

  std::ofstream(dir / "t.dplw", std::ios::binary) << bytes.substr(0, bytes.size() - 3);
  CHECK_THROWS_AS(load_checkpoint(dir / "t.dplw"), FormatError);
  std::ofstream(dir / "m.dplw", std::ios::binary) << "DPLX" << bytes.substr(4);
  CHECK_THROWS_AS(load_checkpoint(dir / "m.dplw"), FormatError);
}
