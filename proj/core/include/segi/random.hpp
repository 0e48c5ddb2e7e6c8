#pragma once

#include <cstdint>
#include <random>

namespace segi {

/// Seeded random stream used by every stochastic operation.
///
/// Wraps std::mt19937_64 and derives uniform/Bernoulli/index draws directly
/// from raw engine output so sequences do not depend on the standard
/// library's distribution implementations. Gaussian draws use
/// std::normal_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);

  double gaussian(double sigma);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Stateless 64-bit mixer (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

/// Seed of the substream for one experiment/frame of a run. Depends only on
/// its arguments, so sweeps are reproducible regardless of execution order.
std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t experiment,
                             std::uint64_t frame);

}  // namespace segi
