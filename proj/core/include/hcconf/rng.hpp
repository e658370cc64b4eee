#pragma once

#include <cstdint>
#include <random>

namespace hcconf {

/// SplitMix64 finaliser; used to derive independent substream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of substream `lane` for case `index` under a cohort `seed`:
/// splitmix64(splitmix64(seed) ^ splitmix64(2 * index + lane + 1)).
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t lane) noexcept;

/**
 * Portable generator: std::mt19937_64 (bit-exact across standard libraries)
 * with hand-rolled uniform and normal transforms, since the <random>
 * distributions are implementation-defined.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// 53-bit uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  /// Log-uniform in [lo, hi], lo > 0.
  double log_uniform(double lo, double hi);
  /// Standard normal by Box-Muller (one draw per call, two uniforms consumed).
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace hcconf
