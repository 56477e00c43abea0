#include "dplab/dataset.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dplab/rng.hpp"

namespace dplab {

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

DatasetSplit split_dataset(const std::vector<std::string>& ids, double train_ratio,
                           std::uint64_t seed) {
  if (ids.empty()) throw std::invalid_argument("split_dataset: empty id list");
  if (!(train_ratio > 0.0 && train_ratio < 1.0)) {
    throw std::invalid_argument("split_dataset: ratio must lie in (0, 1)");
  }
  const auto n = ids.size();
  const auto n_val = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * (1.0 - train_ratio)));
  const auto order = seeded_permutation(n, seed);

  DatasetSplit split;
  split.train.reserve(n - n_val);
  split.val.reserve(n_val);
  for (std::size_t i = 0; i < n; ++i) {
    (i < n - n_val ? split.train : split.val).push_back(ids[order[i]]);
  }
  return split;
}

}  // namespace dplab
