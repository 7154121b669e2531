#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace cropyield {

/// SplitMix64 finalizer. Used to derive independent substream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// FNV-1a over bytes; stable across platforms and runs.
std::uint64_t stable_hash(std::string_view bytes) noexcept;

/// Seed for substream `index` of role `role` under master `seed`.
/// Every randomized component (per tree, per epoch, per class stratum)
/// draws from its own substream so serial and parallel execution agree.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view role, std::uint64_t index) noexcept;

/// Seedable generator over std::mt19937_64. The standard distributions are
/// implementation-defined, so every draw we need is implemented here on top
/// of the raw 64-bit engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::string_view role, std::uint64_t index)
      : engine_(derive_seed(seed, role, index)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform integer in [0, bound). Bias-free (rejection). bound > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal via the Marsaglia polar method.
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  template <class T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cropyield
