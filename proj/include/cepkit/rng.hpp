#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace cepkit {

/// Derives an independent per-stream seed from a base seed and a stream id
/// (example index, sweep run index). splitmix64 finalizer over the combined
/// word; the same function is used everywhere a sub-seed is needed, so any
/// record or run can be regenerated in isolation.
constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Seeded random source. The engine is std::mt19937_64 (output sequence is
/// fixed by the standard) and all draw helpers live here, so sequences are
/// reproducible across platforms for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double u01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    const int span = hi - lo + 1;
    int k = static_cast<int>(u01() * static_cast<double>(span));
    if (k >= span) k = span - 1;
    return lo + k;
  }

  bool bernoulli(double p) { return u01() < p; }

  /// Categorical draw over non-negative weights summing to ~1.
  std::size_t categorical(std::span<const double> weights) {
    const double u = u01();
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] > 0.0) last_positive = i;
      acc += weights[i];
      if (u < acc) return i;
    }
    return last_positive;  // rounding dust pushed u past the total
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cepkit
