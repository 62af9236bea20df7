#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "prtail/sample_set.hpp"

namespace prtail {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Immutable directed graph on dense ids [0, n) in compressed sparse row form.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  /// Builds the graph from (source, target) pairs. Adjacency lists are sorted
  /// by target; parallel edges are collapsed unless keep_duplicates is set.
  static DirectedGraph from_edges(std::size_t node_count, std::vector<Edge> edges,
                                  bool keep_duplicates);

  std::size_t node_count() const noexcept { return in_degree_.size(); }
  std::size_t edge_count() const noexcept { return targets_.size(); }

  std::span<const NodeId> out_neighbors(NodeId v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::size_t out_degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  std::size_t in_degree(NodeId v) const { return in_degree_[v]; }

  /// Edges in source order.
  std::vector<Edge> edges() const;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> targets_;
  std::vector<std::size_t> in_degree_;
};

struct ParseOptions {
  bool keep_duplicates = false;
};

/// A parsed graph together with the original id of every dense node.
struct ParsedGraph {
  DirectedGraph graph;
  std::vector<std::uint64_t> original_ids;  // ascending; dense id i <-> original_ids[i]
};

/// SNAP-style edge list: "src dst" per line, whitespace separated, '#' comments,
/// arbitrary nonnegative integer ids. Ids are remapped to [0, n) in ascending
/// order of the original id.
ParsedGraph parse_edge_list(std::istream& in, const ParseOptions& options = {});
ParsedGraph read_edge_list_file(const std::string& path, const ParseOptions& options = {});

/// Writes "src dst" lines; with `ids` the original ids are emitted.
void write_edge_list(std::ostream& out, const DirectedGraph& g,
                     std::span<const std::uint64_t> ids = {});

enum class DanglingPolicy {
  redistribute,  // mass of out-degree-0 nodes is spread uniformly; sum stays n
  drop,          // plain PR(i) = c sum PR(j)/d_j + (1 - c); mass leaks
};

struct PageRankOptions {
  double c = 0.85;
  double tol = 1e-10;  // L1 change per node
  std::size_t max_iter = 1000;
  DanglingPolicy dangling = DanglingPolicy::redistribute;
};

/// PageRank in the mean-one normalisation PR(i) = c sum_{j->i} PR(j)/d_j + (1 - c).
struct PageRankVector {
  std::vector<double> values;
  double c = 0.0;
  std::size_t iterations = 0;
  double residual = 0.0;  // final total L1 change
  bool converged = false;
  std::vector<double> residual_history;
};

/// Power iteration from PR == 1 until the total L1 change drops to tol * n.
/// On max_iter the last iterate is returned with converged == false.
PageRankVector pagerank(const DirectedGraph& g, const PageRankOptions& options = {});

struct DegreeHistograms {
  SampleSet in;
  SampleSet out;
  double mean_out = 0.0;
};

DegreeHistograms degree_histograms(const DirectedGraph& g);

/// "node value" lines preceded by a '#' metadata header.
void write_pagerank(std::ostream& out, const PageRankVector& pr,
                    std::span<const std::uint64_t> ids = {});

}  // namespace prtail
