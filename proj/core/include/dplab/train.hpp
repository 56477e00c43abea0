#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dplab/dataset.hpp"
#include "dplab/image.hpp"
#include "dplab/model.hpp"
#include "dplab/report.hpp"

namespace dplab {

/// One (noisy, clean) training pair.
struct PairSample {
  std::string id;
  Image noisy;
  Image clean;
  /// Noise family label used in metric rows.
  std::string noise;
};

struct TrainConfig {
  ModelKind model = ModelKind::Dpl;
  /// Total optimizer steps. Ignored when `epochs` is set.
  long iterations = 200;
  /// Full passes over the training split; each epoch is floor(n_train / b) steps.
  std::optional<long> epochs;
  int batch_size = 4;
  double lr = 1e-4;
  std::uint64_t seed = 0;
  int depth = 2;
  int base_channels = 16;
  double train_ratio = 0.8;
  /// Validation PSNR is measured every this many steps and after the last one.
  long eval_interval = 50;
  LossTerms terms;
  /// Where to write a checkpoint if a non-finite loss aborts training.
  std::optional<std::filesystem::path> dump_dir;

  /// Throws std::invalid_argument for b < 1, non-positive budgets or lr < 0.
  void validate() const;
};

struct LossRow {
  long iter = 0;
  long epoch = 0;
  LossReport loss;
};

struct TrainResult {
  /// Parameters of the best validation checkpoint.
  DplModel<float> model;
  std::vector<LossRow> curve;
  DatasetSplit split;
  long best_iter = 0;
  double best_val_psnr = 0.0;
  long iterations_run = 0;
  long epochs_run = 0;
};

/// The split train() uses for `ids` under `config` (seed and train_ratio).
/// A single id goes to training with an empty validation set.
DatasetSplit train_split(const TrainConfig& config, const std::vector<std::string>& ids);

/// Seeded split, per-epoch seeded shuffle, consecutive batches (a partial tail
/// batch is dropped). If the split leaves validation empty the training split is
/// used for model selection. Throws std::invalid_argument for an empty dataset
/// or mismatched sizes, dplab::TrainingError on a non-finite loss.
TrainResult train(const TrainConfig& config, const std::vector<PairSample>& dataset);

/// Subset of `dataset` whose ids are listed, in list order.
std::vector<PairSample> select(const std::vector<PairSample>& dataset, const std::vector<std::string>& ids);

/// Per image: a model row (algorithm = model kind) then a "noisy" row, both
/// scored against the clean image. Model outputs are clipped to [0, 1].
MetricReport evaluate(const DplModel<float>& model, const std::vector<PairSample>& dataset);

/// Mean PSNR of the clipped model output over the dataset (finite entries).
double mean_output_psnr(const DplModel<float>& model, const std::vector<PairSample>& dataset);

/// Header `iter,l_n,l_c,l_f,l_o`.
std::string loss_curve_csv(const std::vector<LossRow>& curve);
void write_loss_curve(const std::filesystem::path& path, const std::vector<LossRow>& curve);

}  // namespace dplab
