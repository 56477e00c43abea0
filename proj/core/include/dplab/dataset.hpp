#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dplab {

struct DatasetSplit {
  std::vector<std::string> train;
  std::vector<std::string> val;
};

/// Deterministic seeded shuffle, then the last round(n * (1 - train_ratio))
/// identifiers of the permutation go to validation.
/// Throws std::invalid_argument for empty ids or ratio outside (0, 1).
DatasetSplit split_dataset(const std::vector<std::string>& ids, double train_ratio,
                           std::uint64_t seed);

/// Fisher-Yates permutation of [0, n) driven by Rng(seed).
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

}  // namespace dplab
