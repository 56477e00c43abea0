#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dplab/classic.hpp"

namespace dplab::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIncompatible = 3;

/// Bad flags or values; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Data that cannot be used with the requested model or operation; exit code 3.
class IncompatibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenOptions {
  int count = 0;
  int size = 128;
  std::uint64_t seed = 0;
  int ellipses = 6;
  double texture = 0.05;
  fs::path out;
};

struct CorruptOptions {
  std::string noise;
  std::uint64_t seed = 0;
  fs::path in;
  fs::path out;
  /// "key=value" overrides of the family defaults.
  std::vector<std::string> params;
  bool clip = true;
};

struct DenoiseOptions {
  std::string algo;
  /// Directory (manifest.csv, pairs.csv or *.dplf) or a pairs manifest file.
  fs::path in;
  fs::path out;
  std::optional<double> sigma;
  std::vector<std::string> params;
};

struct TrainOptions {
  std::string model = "dpl";
  fs::path data;
  long iters = 200;
  std::optional<long> epochs;
  int batch = 4;
  double lr = 1e-4;
  std::uint64_t seed = 0;
  int depth = 2;
  int base = 16;
  double train_ratio = 0.8;
  long eval_interval = 50;
  fs::path out;
};

struct EvalOptions {
  fs::path pairs;
  fs::path csv;
  /// At most one of these selects the scored output besides the noisy reference.
  std::optional<std::string> algo;
  std::optional<fs::path> checkpoint;
  std::optional<fs::path> denoised;
  std::string label = "denoised";
  std::string model = "dpl";
  int depth = 2;
  int base = 16;
  std::optional<double> sigma;
  std::vector<std::string> params;
};

/// Writes phantom_%04d.dplf, phantom_%04d.pgm and manifest.csv. Phantom i uses seed + i.
void cmd_gen(const GenOptions& options, std::ostream& log);
/// Writes <id>_<noise>.dplf per input and pairs.csv. Image i uses seed + i.
void cmd_corrupt(const CorruptOptions& options, std::ostream& log);
/// Writes <id>.dplf per input and timings.csv (`image_id,algorithm,seconds`).
void cmd_denoise(const DenoiseOptions& options, std::ostream& log);
/// Writes model.dplw, loss.csv and val_metrics.csv.
void cmd_train(const TrainOptions& options, std::ostream& log);
void cmd_eval(const EvalOptions& options, std::ostream& log);

/// "key=value" list to a map. Throws UsageError on malformed entries.
ParamOverrides parse_params(const std::vector<std::string>& params);

/// Parses argv and dispatches; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dplab::cli
