#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace geoc {

// Counter-based SplitMix64. Draw `i` of stream `s` under seed `k` is
//   mix64(key(k, s) + (i + 1) * 0x9E3779B97F4A7C15)
// where mix64 is the SplitMix64 finalizer and key(k, s) = mix64(k ^ mix64(s)).
// Uniform doubles take the top 53 bits; normals use Box-Muller on two
// consecutive uniforms (cosine branch only). Everything here is exact integer
// arithmetic plus IEEE double ops, so any language can reproduce the streams.

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(mix64(seed ^ mix64(stream))) {}

  /// Independent stream derived from this one.
  constexpr CounterRng split(std::uint64_t stream) const noexcept {
    CounterRng r(0);
    r.key_ = mix64(key_ ^ mix64(stream + kGolden));
    return r;
  }

  constexpr std::uint64_t bits_at(std::uint64_t counter) const noexcept {
    return mix64(key_ + (counter + 1) * kGolden);
  }

  /// Uniform in [0, 1).
  double uniform_at(std::uint64_t counter) const noexcept {
    return static_cast<double>(bits_at(counter) >> 11) * 0x1.0p-53;
  }

  // Sequential interface over the same counter space.
  std::uint64_t next_bits() noexcept { return bits_at(counter_++); }
  double uniform() noexcept { return uniform_at(counter_++); }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  double normal() noexcept {
    // 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace geoc
