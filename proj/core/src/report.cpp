#include "dplab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <utility>

#include "dplab/errors.hpp"

namespace dplab {

const MetricRow& MetricReport::add(std::string image_id, std::string algorithm,
                                   std::string noise, const Image& reference,
                                   const Image& test, const SsimParams& params) {
  MetricRow row;
  row.image_id = std::move(image_id);
  row.algorithm = std::move(algorithm);
  row.noise = std::move(noise);
  row.mse = mse(reference, test);
  row.psnr_db = psnr_from_mse(row.mse, params.data_range);
  row.ssim = ssim(reference, test, params);
  rows_.push_back(std::move(row));
  return rows_.back();
}

std::vector<MetricRow> MetricReport::aggregates() const {
  struct Acc {
    std::string algorithm, noise;
    double mse = 0.0, psnr = 0.0, ssim = 0.0;
    int count = 0, finite = 0;
  };
  std::vector<Acc> groups;
  for (const auto& r : rows_) {
    Acc* acc = nullptr;
    for (auto& g : groups) {
      if (g.algorithm == r.algorithm && g.noise == r.noise) acc = &g;
    }
    if (acc == nullptr) {
      groups.push_back({r.algorithm, r.noise});
      acc = &groups.back();
    }
    acc->mse += r.mse;
    acc->ssim += r.ssim;
    ++acc->count;
    if (std::isfinite(r.psnr_db)) {
      acc->psnr += r.psnr_db;
      ++acc->finite;
    }
  }
  std::vector<MetricRow> out;
  out.reserve(groups.size());
  for (const auto& g : groups) {
    MetricRow row;
    row.image_id = kAggregateId;
    row.algorithm = g.algorithm;
    row.noise = g.noise;
    row.mse = g.mse / g.count;
    row.psnr_db = g.finite > 0 ? g.psnr / g.finite : std::numeric_limits<double>::infinity();
    row.ssim = g.ssim / g.count;
    out.push_back(std::move(row));
  }
  return out;
}

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

std::string MetricReport::to_csv() const {
  std::string out = "image_id,algorithm,noise,mse,psnr_db,ssim\n";
  auto append = [&out](const MetricRow& r) {
    out += r.image_id + ',' + r.algorithm + ',' + r.noise + ',' + format_number(r.mse) + ',' +
           format_number(r.psnr_db) + ',' + format_number(r.ssim) + '\n';
  };
  for (const auto& r : rows_) append(r);
  for (const auto& r : aggregates()) append(r);
  return out;
}

void MetricReport::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << to_csv();
}

}  // namespace dplab
