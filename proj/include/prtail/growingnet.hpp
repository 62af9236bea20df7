#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "prtail/graph.hpp"
#include "prtail/random.hpp"

namespace prtail {

/// Growing network where each new link goes to a uniformly random existing
/// node with probability beta and to a node chosen proportionally to its
/// current in-degree otherwise.
struct GrowthParams {
  double beta = 0.2;
  std::uint32_t d = 8;  // out-links per node
  std::size_t n_final = 50'000;
  Seed seed = 1;

  /// Throws ParameterError unless 0 <= beta <= 1 and n_final > d >= 1.
  void validate() const;
};

/// Starts from d isolated nodes; every new node links to d distinct existing
/// nodes (in-degrees are updated once all d links are placed). Finally each of
/// the first d nodes links to d distinct random other nodes, so every node
/// ends with out-degree exactly d. While all in-degrees are zero the
/// preferential rule falls back to uniform.
DirectedGraph generate(const GrowthParams& params);

/// p_i = beta / n + (1 - beta) * indeg_i / sum(indeg); uniform when the sum is 0.
std::vector<double> attachment_probabilities(std::span<const std::uint64_t> in_degrees, double beta);

}  // namespace prtail
