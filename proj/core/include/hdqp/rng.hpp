#pragma once

#include <cstdint>

namespace hdqp::rng {

/// SplitMix64 output function: a bijective avalanche mix of a 64-bit word.
std::uint64_t mix64(std::uint64_t x);

/// Derive a child seed from a parent seed and a stream index. Used for all
/// stream splitting in the project: replicate r of scenario s runs on
/// derive(derive(base_seed, s), r). The mapping is fixed so results are
/// reproducible across platforms and thread counts.
std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

/// FNV-1a hash of a string, for turning scenario names into stream ids.
std::uint64_t hash_name(const char* name);

/// Counter-based 64-bit generator (SplitMix64). Successive outputs are the
/// mix of an incrementing counter, so jumping/splitting is trivial and the
/// sequence is fully determined by the seed.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform double in the open interval (0, 1), 53-bit resolution.
  double next_unit();

  /// Standard normal via the inverse CDF (Wichura's PPND16 rational
  /// approximation). Chosen over ziggurat so that exactly one uniform is
  /// consumed per variate, which keeps streams reproducible.
  double next_normal();

  /// Uniform integer in [0, n) by 128-bit multiply-shift.
  std::uint64_t next_below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

/// Inverse of the standard normal CDF, accurate to ~1e-15 for u in (0,1).
double inverse_normal_cdf(double u);

}  // namespace hdqp::rng
