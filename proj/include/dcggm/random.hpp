#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace dcggm {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view s);

/// Stage sub-seed: seed XOR hash(stage), then mixed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

/// Counter-based stream: draw i is a pure function of (seed, i), so any
/// element can be regenerated independently of the others.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits_at(std::uint64_t counter) const;
  /// Uniform in (0, 1).
  double uniform_at(std::uint64_t counter) const;
  /// Standard normal (Box-Muller on draws 2i, 2i+1).
  double normal_at(std::uint64_t index) const;

  std::uint64_t next_bits() { return bits_at(counter_++); }
  double next_uniform() { return uniform_at(counter_++); }
  double next_normal() { return normal_at(counter_++); }
  /// Uniform integer in [0, n), rejection-sampled.
  std::uint64_t next_below(std::uint64_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// Seeded Fisher-Yates permutation of 0..n-1.
std::vector<std::size_t> permutation(std::size_t n, std::uint64_t seed);

}  // namespace dcggm
