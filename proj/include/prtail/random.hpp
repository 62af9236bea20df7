#pragma once

#include <cstdint>
#include <random>

namespace prtail {

using Seed = std::uint64_t;

/// Independent sub-streams derived from one master seed.
enum class Stream : std::uint64_t {
  interval = 1,    // draws of the interval T
  poisson = 2,     // Poisson counts N(T) given T
  resample = 3,    // pool indices in the population dynamics
  generation = 4,  // per-generation master seeds
  growth = 5,      // growing-network attachment choices
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed splitting rule: every (stream, index) pair gets
///   splitmix64(splitmix64(master ^ splitmix64(stream)) + index)
/// so chunk k of stream s is reproducible independently of how many threads
/// produce the other chunks.
Seed derive_seed(Seed master, Stream stream, std::uint64_t index = 0) noexcept;

class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform on the open interval (0, 1), 53 random bits.
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t index(std::uint64_t n);

  /// Exact Poisson variate: sequential inversion below mean 10, transformed
  /// rejection with squeeze (PTRS) above.
  std::uint64_t poisson(double mean);

 private:
  std::mt19937_64 engine_;
};

/// log P(N = k) for N ~ Poisson(mean), accurate for very large k and mean.
double log_poisson_pmf(std::uint64_t k, double mean);

}  // namespace prtail
