#pragma once

#include <cstdint>
#include <random>

namespace pmllab {

/// Seed for every random stream in the library.
struct RngSeed {
  std::uint64_t value = 0;
};

/// SplitMix64 finalizer; used to decorrelate derived seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for trial `index` of a run seeded with `base` (base XOR index, mixed).
constexpr RngSeed derive_seed(RngSeed base, std::uint64_t index) {
  return RngSeed{splitmix64(base.value ^ index)};
}

/// Random stream built on std::mt19937_64, whose output sequence is fixed by
/// the C++ standard. The conversions below are hand-written because the
/// standard distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(RngSeed seed) : engine_(splitmix64(seed.value)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), bound > 0 (Lemire's method with rejection).
  std::uint64_t below(std::uint64_t bound) {
    __uint128_t m = static_cast<__uint128_t>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = -bound % bound;
      while (low < threshold) {
        m = static_cast<__uint128_t>(engine_()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pmllab
