#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "prtail/random.hpp"
#include "prtail/rvmodel.hpp"
#include "prtail/sample_set.hpp"

namespace prtail {

/// Damping c, out-degree d and tail index alpha of the PageRank equation
///   R = c/d * (R_1 + ... + R_N(T)) + (1 - c).
struct ModelParams {
  double c = 0.85;
  double d = 8.0;
  double alpha = 1.1;

  /// Throws ParameterError unless 0 < c < 1, d > 1 and alpha > 0.
  void validate() const;

  /// Pareto in-degree model calibrated to E N(T) = d.
  InDegreeModel in_degree_model() const;

  std::string describe() const;
};

/// Current approximation of the law of R as an equally weighted sample.
struct GenerationPool {
  std::vector<double> samples;
  std::uint64_t generation = 0;

  static GenerationPool constant(std::size_t size, double value);
};

/// One step of the population dynamics: each of `pool_size` outputs draws
/// k ~ N(T), sums k values picked uniformly with replacement from `pool`, and
/// emits (c/d) * sum + (1 - c). Throws StateError on an empty pool.
GenerationPool iterate_generation(const GenerationPool& pool, const ModelParams& params,
                                  const InDegreeModel& model, std::size_t pool_size, Seed seed);

struct GenerationStats {
  std::uint64_t generation = 0;
  double mean = 0.0;
  double ks = 0.0;  // KS distance to the previous generation
  double max = 0.0;
  std::vector<double> top;  // ten largest values, descending
};

struct SolveOptions {
  std::size_t pool_size = 1'000'000;
  std::size_t generations = 30;
  double ks_threshold = 0.005;
};

struct SolveResult {
  SampleSet samples;
  std::vector<GenerationStats> diagnostics;
  double final_ks = 0.0;
  /// False when the last KS distance exceeds the threshold. A warning only.
  bool converged = true;
};

/// Iterates the population dynamics from R == 1 for options.generations steps.
/// Generation g uses the seed derive_seed(seed, Stream::generation, g).
SolveResult solve_r(const ModelParams& params, const InDegreeModel& model,
                    const SolveOptions& options, Seed seed);

/// n draws of (1 - c)((c/d) N + 1) with N ~ N(T); R dominates this law
/// stochastically.
SampleSet lower_bound_samples(const InDegreeModel& model, const ModelParams& params,
                              std::size_t n, Seed seed);

/// CSV with columns generation,mean,ks,max.
void write_diagnostics_csv(std::ostream& out, const std::vector<GenerationStats>& stats);

/// Long format "generation,rank,value" of the ten largest values per generation.
void write_top_values_csv(std::ostream& out, const std::vector<GenerationStats>& stats);

}  // namespace prtail
