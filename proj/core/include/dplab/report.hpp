#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dplab/image.hpp"
#include "dplab/metrics.hpp"

namespace dplab {

struct MetricRow {
  std::string image_id;
  std::string algorithm;
  std::string noise;
  double mse = 0.0;
  double psnr_db = 0.0;
  double ssim = 0.0;
};

inline constexpr const char* kAggregateId = "__mean__";

/// Per-image metric rows plus aggregate means per (algorithm, noise).
class MetricReport {
 public:
  void add(MetricRow row) { rows_.push_back(std::move(row)); }
  /// Computes and appends the row for `test` scored against `reference`.
  const MetricRow& add(std::string image_id, std::string algorithm, std::string noise,
                       const Image& reference, const Image& test,
                       const SsimParams& params = {});

  const std::vector<MetricRow>& rows() const noexcept { return rows_; }

  /// One `__mean__` row per (algorithm, noise) in first-appearance order.
  /// PSNR is averaged over finite entries only (+inf if none are finite).
  std::vector<MetricRow> aggregates() const;

  /// Header `image_id,algorithm,noise,mse,psnr_db,ssim`, per-image rows then aggregates.
  std::string to_csv() const;
  void write_csv(const std::filesystem::path& path) const;

 private:
  std::vector<MetricRow> rows_;
};

/// Fixed-format number used in every CSV this project writes ("inf" for +infinity).
std::string format_number(double value);

}  // namespace dplab
