#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace lowlight {

// Deterministic 64-bit generator (splitmix-style). Output k of a stream seeded
// with s is mix(s + (k+1)*GAMMA), so any stream position can be evaluated
// without generating its predecessors.
struct SplitMix64 {
  static constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  uint64_t state;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    state += kGamma;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in (0, 1]; never 0, so log() of it is finite
  double next_unit() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }
};

// Standard-normal draw for flat sample index k: consumes stream outputs 2k and
// 2k+1 of SplitMix64(seed) through Box-Muller (cosine branch). Indexed access
// makes noise injection independent of evaluation order, so parallel fills
// match the sequential stream exactly.
inline double gaussian_at(uint64_t seed, uint64_t index) {
  SplitMix64 g(seed + 2 * index * SplitMix64::kGamma);
  const double u1 = g.next_unit();
  const double u2 = g.next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace lowlight
