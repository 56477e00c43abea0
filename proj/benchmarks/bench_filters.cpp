#include <benchmark/benchmark.h>

#include "dplab/classic.hpp"
#include "dplab/noise.hpp"
#include "dplab/phantom.hpp"

namespace {

dplab::Image noisy_input(int size) {
  const auto clean = dplab::gen_phantom(dplab::PhantomSpec(size, 6, 0.05f, 1));
  return dplab::apply_noise(clean, dplab::NoiseSpec::defaults(dplab::NoiseFamily::Gaussian, 2));
}

void BM_Classic(benchmark::State& state, const char* name) {
  const auto img = noisy_input(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dplab::run_classic(name, img, 0.0707));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.size()));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Classic, mean, "mean")->Arg(128)->Arg(256);
BENCHMARK_CAPTURE(BM_Classic, median, "median")->Arg(128)->Arg(256);
BENCHMARK_CAPTURE(BM_Classic, gaussian, "gaussian")->Arg(128)->Arg(256);
BENCHMARK_CAPTURE(BM_Classic, bilateral, "bilateral")->Arg(128);
BENCHMARK_CAPTURE(BM_Classic, wiener, "wiener")->Arg(128);
BENCHMARK_CAPTURE(BM_Classic, wavelet_b, "wavelet_b")->Arg(128);
BENCHMARK_CAPTURE(BM_Classic, nlm, "nlm")->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Classic, bm3d, "bm3d")->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
