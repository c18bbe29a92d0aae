#pragma once

#include <cstdint>

namespace pursuit {

/// splitmix64: the fixed, portable 64-bit generator used for every sampled
/// quantity in the library. Identical output on every platform; streams can
/// be split off deterministically for independent sub-tasks.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 bits of the raw stream.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double next_double(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Derive an independent stream; distinct `stream` values give distinct,
  /// reproducible generators.
  SplitMix64 split(std::uint64_t stream) {
    SplitMix64 base(state_ ^ (0xA0761D6478BD642FULL * (stream + 1)));
    return SplitMix64(base.next_u64());
  }

 private:
  std::uint64_t state_;
};

}  // namespace pursuit
