#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace dplab {

/// xoshiro256++ stream seeded through SplitMix64. Normal variates use the
/// Box-Muller transform; both variates of a pair are consumed in order.
///
/// Single owner: not safe to share between threads. Derive independent
/// streams with distinct seeds (e.g. base_seed + index).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Top 53 bits scaled by 2^-53, in [0, 1).
  double uniform() noexcept;
  double normal() noexcept;
  double normal(double mean, double stddev) noexcept { return mean + stddev * normal(); }
  /// Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  std::array<std::uint64_t, 4> state_{};
  std::optional<double> spare_;
};

}  // namespace dplab
