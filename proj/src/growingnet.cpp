#include "prtail/growingnet.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "prtail/errors.hpp"

namespace prtail {

void GrowthParams::validate() const {
  if (!(beta >= 0.0 && beta <= 1.0)) throw ParameterError("beta must lie in [0, 1]");
  if (d < 1) throw ParameterError("out-degree d must be at least 1");
  if (n_final <= d) throw ParameterError("n_final must exceed d");
  if (n_final > std::numeric_limits<NodeId>::max()) throw ParameterError("n_final too large");
}

DirectedGraph generate(const GrowthParams& params) {
  params.validate();
  const std::size_t n = params.n_final;
  const std::uint32_t d = params.d;
  Rng rng(derive_seed(params.seed, Stream::growth));

  std::vector<Edge> edges;
  edges.reserve(n * d);
  // One entry per placed link target: a uniform pick is a pick proportional
  // to in-degree.
  std::vector<NodeId> link_targets;
  link_targets.reserve(n * d);
  std::vector<NodeId> chosen;
  chosen.reserve(d);

  for (NodeId v = d; v < n; ++v) {
    chosen.clear();
    while (chosen.size() < d) {
      NodeId cand;
      if (link_targets.empty() || rng.uniform() < params.beta) {
        cand = static_cast<NodeId>(rng.index(v));
      } else {
        cand = link_targets[rng.index(link_targets.size())];
      }
      if (std::find(chosen.begin(), chosen.end(), cand) == chosen.end()) chosen.push_back(cand);
    }
    for (NodeId t : chosen) {
      edges.emplace_back(v, t);
      link_targets.push_back(t);
    }
  }

  for (NodeId v = 0; v < d; ++v) {
    chosen.clear();
    while (chosen.size() < d) {
      const auto cand = static_cast<NodeId>(rng.index(n));
      if (cand == v) continue;
      if (std::find(chosen.begin(), chosen.end(), cand) == chosen.end()) chosen.push_back(cand);
    }
    for (NodeId t : chosen) edges.emplace_back(v, t);
  }
  return DirectedGraph::from_edges(n, std::move(edges), true);
}

std::vector<double> attachment_probabilities(std::span<const std::uint64_t> in_degrees, double beta) {
  if (in_degrees.empty()) throw ParameterError("attachment over an empty node set");
  if (!(beta >= 0.0 && beta <= 1.0)) throw ParameterError("beta must lie in [0, 1]");
  const double n = static_cast<double>(in_degrees.size());
  const auto total = std::accumulate(in_degrees.begin(), in_degrees.end(), std::uint64_t{0});
  std::vector<double> p(in_degrees.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pref = total == 0 ? 1.0 / n
                                   : static_cast<double>(in_degrees[i]) / static_cast<double>(total);
    p[i] = beta / n + (1.0 - beta) * pref;
  }
  return p;
}

}  // namespace prtail
