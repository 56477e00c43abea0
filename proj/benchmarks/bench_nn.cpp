#include <benchmark/benchmark.h>

#include <vector>

#include "dplab/model.hpp"
#include "dplab/nn/ops.hpp"
#include "dplab/rng.hpp"

namespace {

using Tensor = dplab::nn::Tensor<float>;

Tensor random_tensor(dplab::nn::Shape shape, std::uint64_t seed, bool grad = false) {
  dplab::Rng rng(seed);
  std::vector<float> v(shape.numel());
  for (auto& x : v) x = static_cast<float>(rng.normal());
  return Tensor::from(shape, std::move(v), grad);
}

void BM_Conv3x3Forward(benchmark::State& state) {
  const int c = static_cast<int>(state.range(0));
  const auto x = random_tensor({4, c, 64, 64}, 1);
  const auto w = random_tensor({c, c, 3, 3}, 2);
  const auto b = Tensor::zeros({1, c, 1, 1});
  for (auto _ : state) benchmark::DoNotOptimize(dplab::nn::conv2d(x, w, b));
}

void BM_Conv3x3Backward(benchmark::State& state) {
  const int c = static_cast<int>(state.range(0));
  const auto x = random_tensor({4, c, 64, 64}, 1, true);
  const auto w = random_tensor({c, c, 3, 3}, 2, true);
  const auto b = Tensor::zeros({1, c, 1, 1}, true);
  for (auto _ : state) dplab::nn::backward(dplab::nn::sum(dplab::nn::conv2d(x, w, b)));
}

void BM_TrainStep(benchmark::State& state) {
  const auto kind = state.range(0) == 0 ? dplab::ModelKind::Dpl : dplab::ModelKind::UnetBaseline;
  dplab::DplModel<float> model(kind, {1, 2, 16, 1}, {}, 3);
  const auto x = random_tensor({4, 1, 64, 64}, 4);
  const auto y = random_tensor({4, 1, 64, 64}, 5);
  for (auto _ : state) benchmark::DoNotOptimize(model.train_step(x, y));
  state.SetLabel(std::string(dplab::to_string(kind)));
}

}  // namespace

BENCHMARK(BM_Conv3x3Forward)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Conv3x3Backward)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainStep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
