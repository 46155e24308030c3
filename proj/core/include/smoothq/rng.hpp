#pragma once

#include <cstdint>

namespace smoothq {

/// SplitMix64 generator (Steele, Lea & Flood; the engine behind Java's
/// SplittableRandom). The state advances by the 64-bit golden-ratio
/// increment and the output is a fixed xor-shift-multiply finalizer, so a
/// stream is fully determined by its 64-bit seed and reproduces bit-for-bit
/// on every platform.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    std::uint64_t x = (state_ += UINT64_C(0x9e3779b97f4a7c15));
    x = (x ^ (x >> 30)) * UINT64_C(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)) * UINT64_C(0x94d049bb133111eb);
    return x ^ (x >> 31);
  }

  /// Uniform variate strictly inside (0,1): the top 53 bits offset by half
  /// an ulp, i.e. (k + 1/2) * 2^-53. Never returns 0 or 1, so inverse-cdf
  /// sampling is safe at both tails.
  double uniform() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

/// Derives the seed of substream `index` from a run seed. This is the
/// SplitMix64 finalizer applied to seed + (index+1) * golden increment;
/// replicate r of a seeded experiment always draws from
/// SplitMix64(derive_stream(seed, r)) regardless of execution order.
constexpr std::uint64_t derive_stream(std::uint64_t seed,
                                      std::uint64_t index) noexcept {
  std::uint64_t x = seed + UINT64_C(0x9e3779b97f4a7c15) * (index + 1);
  x = (x ^ (x >> 30)) * UINT64_C(0xbf58476d1ce4e5b9);
  x = (x ^ (x >> 27)) * UINT64_C(0x94d049bb133111eb);
  return x ^ (x >> 31);
}

}  // namespace smoothq
