#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dplab/classic.hpp"
#include "dplab/noise.hpp"
#include "dplab/train.hpp"

namespace dplab::cli {

namespace fs = std::filesystem;

/// Reference row scoring the noisy input itself.
inline constexpr const char* kNoisyReference = "noisy";

struct BenchConfig {
  /// Clean images (manifest.csv or *.dplf); generated phantoms when absent.
  std::optional<fs::path> dataset;
  int count = 8;
  int size = 64;
  int ellipses = 6;
  double texture = 0.05;
  /// Seeds are filled in per image at run time.
  std::vector<NoiseSpec> noises;
  /// Classical names plus "noisy".
  std::vector<std::string> algorithms;
  std::map<std::string, ParamOverrides, std::less<>> params;
  std::optional<double> sigma;
  /// "dpl" and/or "unet", trained per noise family with `train`.
  std::vector<std::string> models;
  TrainConfig train;
  fs::path out = "bench_out";
  std::uint64_t seed = 0;
};

/// Line-oriented `key = value` text with `[section]` headers and '#'/';'
/// comments. Top level: seed, out. [data]: dir, count, size, ellipses, texture.
/// [noise]: families (comma list); [noise:<family>]: parameter overrides.
/// [algorithms]: list, sigma; [param:<algo>]: filter overrides.
/// [models]: list, iters, epochs, batch, lr, depth, base, train_ratio, eval_interval.
/// Relative paths resolve against the config file's directory.
/// Throws UsageError for unknown sections, keys or values.
BenchConfig load_bench_config(const fs::path& path);
BenchConfig parse_bench_config(std::istream& in, const fs::path& base_dir = {});

/// Runs every (algorithm or model) x noise cell and writes results_psnr.csv,
/// results_ssim.csv (rows = algorithms, columns = noise families) and
/// results_detail.csv (per-image rows). When models are listed all cells are
/// scored on the held-out split. Failed cells read `error`; returns 1 if any
/// cell failed, else 0.
int cmd_bench(const BenchConfig& config, std::ostream& log);

}  // namespace dplab::cli
