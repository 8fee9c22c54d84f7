#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace extauction {

/// SplitMix64 finalizer. Used to derive independent child seeds.
std::uint64_t mix64(std::uint64_t x);

/// Child seed for a task identified by an ordered list of integers, e.g. {campaign_seed, instance, trial}.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> path);

/// Seeded pseudo-random stream.
///
/// Only the raw 64-bit output of std::mt19937_64 is used (its sequence is fixed by the
/// standard); the conversions to doubles and bounded integers are done here so results
/// are bit-identical across standard library implementations.
class RandomSource
{
public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, bound), bound > 0. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound);

  bool coin() { return (engine_() >> 63) != 0; }

  bool bernoulli(double p) { return uniform01() < p; }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace extauction
