#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace analogy {

/// xoshiro256** stream seeded through splitmix64.
///
/// The generator and every derived draw below are fully specified here, so a
/// given seed yields the same sequence on every platform and standard
/// library. std::uniform_int_distribution is deliberately not used because
/// its algorithm is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t next() noexcept;
  /// Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Standard normal via Box-Muller.
  double normal() noexcept;

 private:
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// k distinct indices drawn uniformly from [0, population), returned in
/// ascending order. Uses a partial Fisher-Yates shuffle.
std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t population,
                                                    std::size_t k);

}  // namespace analogy
