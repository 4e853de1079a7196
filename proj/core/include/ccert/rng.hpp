#pragma once

#include <cstdint>
#include <cmath>

namespace ccert {

/// SplitMix64. Small, fast, and fully portable: streams depend only on the
/// 64-bit state arithmetic, never on libstdc++ distribution internals, so
/// experiment replays are bit-identical across platforms and job counts.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform on [0,1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }

  /// Uniform on (0,1].
  double uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; the sine partner is discarded so the
  /// draw count per sample is fixed.
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  bool coin() { return (next_u64() & 1ull) != 0; }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Counter-based per-trial seed: decorrelated streams keyed on
/// (master seed, trial index), independent of execution order.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master ^ mix64(0x9E3779B97F4A7C15ull * (index + 1)));
}

inline Rng trial_rng(std::uint64_t master, std::uint64_t index) {
  return Rng(trial_seed(master, index));
}

}  // namespace ccert
