#include "prtail/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "prtail/errors.hpp"
#include "prtail/parallel.hpp"
#include "prtail/tailstats.hpp"

namespace prtail {

void ModelParams::validate() const {
  if (!(c > 0.0 && c < 1.0)) throw ParameterError("damping factor c must lie in (0, 1)");
  if (!(d > 1.0) || !std::isfinite(d)) throw ParameterError("out-degree d must exceed 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("alpha must be positive");
}

InDegreeModel ModelParams::in_degree_model() const {
  validate();
  return InDegreeModel::mixed(TailSpec::with_mean(alpha, d));
}

std::string ModelParams::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "c=" << c << " d=" << d << " alpha=" << alpha;
  return os.str();
}

GenerationPool GenerationPool::constant(std::size_t size, double value) {
  return GenerationPool{std::vector<double>(size, value), 0};
}

GenerationPool iterate_generation(const GenerationPool& pool, const ModelParams& params,
                                  const InDegreeModel& model, std::size_t pool_size, Seed seed) {
  params.validate();
  if (pool.samples.empty()) throw StateError("cannot iterate an empty pool");
  if (pool_size == 0) throw ParameterError("pool size must be at least 1");

  const auto counts = sample_in_degree(model, pool_size, seed).values;
  const double weight = params.c / params.d;
  const double floor = 1.0 - params.c;
  const std::span<const double> previous(pool.samples);
  const std::uint64_t m = previous.size();

  GenerationPool next;
  next.generation = pool.generation + 1;
  next.samples.resize(pool_size);
  parallel_for(chunk_count(pool_size), [&](std::size_t chunk) {
    Rng rng(derive_seed(seed, Stream::resample, chunk));
    const std::size_t end = std::min(pool_size, (chunk + 1) * kChunkSize);
    for (std::size_t i = chunk * kChunkSize; i < end; ++i) {
      const auto k = static_cast<std::uint64_t>(counts[i]);
      double sum = 0.0;
      for (std::uint64_t j = 0; j < k; ++j) sum += previous[rng.index(m)];
      next.samples[i] = weight * sum + floor;
    }
  });
  return next;
}

SolveResult solve_r(const ModelParams& params, const InDegreeModel& model,
                    const SolveOptions& options, Seed seed) {
  params.validate();
  if (options.generations < 1) throw ParameterError("need at least one generation");
  if (options.pool_size < 1000) throw ParameterError("pool size must be at least 1000");

  GenerationPool pool = GenerationPool::constant(options.pool_size, 1.0);
  std::vector<double> sorted_prev = pool.samples;
  SolveResult result;
  for (std::size_t g = 1; g <= options.generations; ++g) {
    pool = iterate_generation(pool, params, model, options.pool_size,
                              derive_seed(seed, Stream::generation, g));
    std::vector<double> sorted = pool.samples;
    std::sort(sorted.begin(), sorted.end());

    GenerationStats st;
    st.generation = pool.generation;
    st.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
    st.ks = ks_distance(sorted_prev, sorted);
    st.max = sorted.back();
    const std::size_t top = std::min<std::size_t>(10, sorted.size());
    st.top.assign(sorted.rbegin(), sorted.rbegin() + static_cast<std::ptrdiff_t>(top));
    result.diagnostics.push_back(std::move(st));
    sorted_prev = std::move(sorted);
  }

  result.final_ks = result.diagnostics.back().ks;
  result.converged = result.final_ks <= options.ks_threshold;
  result.samples.values = std::move(pool.samples);
  result.samples.source = "R";
  result.samples.seed = seed;
  result.samples.spec = params.describe() + " in_degree=" + model.describe() +
                        " pool=" + std::to_string(options.pool_size) +
                        " generations=" + std::to_string(options.generations);
  return result;
}

SampleSet lower_bound_samples(const InDegreeModel& model, const ModelParams& params,
                              std::size_t n, Seed seed) {
  params.validate();
  SampleSet out = sample_in_degree(model, n, seed);
  const double weight = params.c / params.d;
  const double floor = 1.0 - params.c;
  for (double& v : out.values) v = floor * (weight * v + 1.0);
  out.source = "lower_bound";
  out.spec = params.describe() + " in_degree=" + model.describe();
  return out;
}

void write_diagnostics_csv(std::ostream& out, const std::vector<GenerationStats>& stats) {
  out.precision(12);
  out << "generation,mean,ks,max\n";
  for (const auto& s : stats) {
    out << s.generation << ',' << s.mean << ',' << s.ks << ',' << s.max << '\n';
  }
}

void write_top_values_csv(std::ostream& out, const std::vector<GenerationStats>& stats) {
  out.precision(12);
  out << "generation,rank,value\n";
  for (const auto& s : stats) {
    for (std::size_t k = 0; k < s.top.size(); ++k) {
      out << s.generation << ',' << k + 1 << ',' << s.top[k] << '\n';
    }
  }
}

}  // namespace prtail
