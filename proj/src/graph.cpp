#include "prtail/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "prtail/errors.hpp"
#include "prtail/parallel.hpp"

namespace prtail {

DirectedGraph DirectedGraph::from_edges(std::size_t node_count, std::vector<Edge> edges,
                                        bool keep_duplicates) {
  if (node_count > std::numeric_limits<NodeId>::max()) throw ParameterError("too many nodes");
  for (const auto& [s, t] : edges) {
    if (s >= node_count || t >= node_count) throw ParameterError("edge endpoint out of range");
  }
  std::sort(edges.begin(), edges.end());
  if (!keep_duplicates) edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  DirectedGraph g;
  g.offsets_.assign(node_count + 1, 0);
  g.in_degree_.assign(node_count, 0);
  g.targets_.reserve(edges.size());
  for (const auto& [s, t] : edges) {
    ++g.offsets_[s + 1];
    ++g.in_degree_[t];
    g.targets_.push_back(t);
  }
  for (std::size_t v = 0; v < node_count; ++v) g.offsets_[v + 1] += g.offsets_[v];
  return g;
}

std::vector<Edge> DirectedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId v = 0; v < node_count(); ++v) {
    for (NodeId t : out_neighbors(v)) out.emplace_back(v, t);
  }
  return out;
}

namespace {

bool is_space(char ch) { return ch == ' ' || ch == '\t' || ch == '\r'; }

const char* skip_space(const char* p, const char* end) {
  while (p != end && is_space(*p)) ++p;
  return p;
}

std::uint64_t parse_id(const char*& p, const char* end, std::size_t lineno) {
  p = skip_space(p, end);
  std::uint64_t value = 0;
  auto [next, ec] = std::from_chars(p, end, value);
  if (ec != std::errc{} || (next != end && !is_space(*next))) {
    const char* stop = p;
    while (stop != end && !is_space(*stop)) ++stop;
    throw ParseError(lineno, "malformed node id '" + std::string(p, stop) + "'");
  }
  p = next;
  return value;
}

}  // namespace

ParsedGraph parse_edge_list(std::istream& in, const ParseOptions& options) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const char* p = line.data();
    const char* end = p + line.size();
    p = skip_space(p, end);
    if (p == end || *p == '#') continue;
    const auto src = parse_id(p, end, lineno);
    p = skip_space(p, end);
    if (p == end) throw ParseError(lineno, "expected two node ids");
    const auto dst = parse_id(p, end, lineno);
    if (skip_space(p, end) != end) throw ParseError(lineno, "trailing characters after edge");
    raw.emplace_back(src, dst);
  }
  if (raw.empty()) throw ParameterError("edge list contains no edges");

  ParsedGraph parsed;
  auto& ids = parsed.original_ids;
  ids.reserve(raw.size() * 2);
  for (const auto& [s, t] : raw) {
    ids.push_back(s);
    ids.push_back(t);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  ids.shrink_to_fit();

  auto dense = [&](std::uint64_t id) {
    return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const auto& [s, t] : raw) edges.emplace_back(dense(s), dense(t));
  parsed.graph = DirectedGraph::from_edges(ids.size(), std::move(edges), options.keep_duplicates);
  return parsed;
}

ParsedGraph read_edge_list_file(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file '" + path + "'");
  return parse_edge_list(in, options);
}

void write_edge_list(std::ostream& out, const DirectedGraph& g,
                     std::span<const std::uint64_t> ids) {
  out << "# nodes: " << g.node_count() << " edges: " << g.edge_count() << '\n';
  for (NodeId v = 0; v < g.node_count(); ++v) {
    for (NodeId t : g.out_neighbors(v)) {
      if (ids.empty()) {
        out << v << ' ' << t << '\n';
      } else {
        out << ids[v] << ' ' << ids[t] << '\n';
      }
    }
  }
}

PageRankVector pagerank(const DirectedGraph& g, const PageRankOptions& options) {
  if (!(options.c > 0.0 && options.c < 1.0)) {
    throw ParameterError("damping factor c must lie in (0, 1)");
  }
  if (!(options.tol > 0.0)) throw ParameterError("tolerance must be positive");
  const std::size_t n = g.node_count();
  if (n == 0) throw ParameterError("PageRank of an empty graph");

  // Pull formulation over the transposed adjacency keeps each destination's
  // summation order fixed, independent of threading.
  std::vector<std::size_t> in_offsets(n + 1, 0);
  for (NodeId v = 0; v < n; ++v) in_offsets[v + 1] = in_offsets[v] + g.in_degree(v);
  std::vector<NodeId> in_sources(g.edge_count());
  {
    std::vector<std::size_t> fill(in_offsets.begin(), in_offsets.end() - 1);
    for (NodeId v = 0; v < n; ++v) {
      for (NodeId t : g.out_neighbors(v)) in_sources[fill[t]++] = v;
    }
  }
  std::vector<double> inv_out(n, 0.0);
  std::vector<NodeId> dangling;
  for (NodeId v = 0; v < n; ++v) {
    if (g.out_degree(v) == 0) {
      dangling.push_back(v);
    } else {
      inv_out[v] = 1.0 / static_cast<double>(g.out_degree(v));
    }
  }

  const double c = options.c;
  const double teleport = 1.0 - c;
  const double tol_total = options.tol * static_cast<double>(n);
  const std::size_t chunks = chunk_count(n);

  PageRankVector result;
  result.c = c;
  std::vector<double> current(n, 1.0);
  std::vector<double> next(n, 0.0);
  std::vector<double> share(n, 0.0);
  std::vector<double> chunk_residual(chunks, 0.0);

  for (std::size_t iter = 1; iter <= options.max_iter; ++iter) {
    double dangling_mass = 0.0;
    if (options.dangling == DanglingPolicy::redistribute) {
      for (NodeId v : dangling) dangling_mass += current[v];
    }
    const double base = teleport + c * dangling_mass / static_cast<double>(n);
    for (std::size_t v = 0; v < n; ++v) share[v] = current[v] * inv_out[v];

    parallel_for(chunks, [&](std::size_t chunk) {
      const std::size_t end = std::min(n, (chunk + 1) * kChunkSize);
      double local = 0.0;
      for (std::size_t v = chunk * kChunkSize; v < end; ++v) {
        double acc = 0.0;
        for (std::size_t e = in_offsets[v]; e < in_offsets[v + 1]; ++e) acc += share[in_sources[e]];
        next[v] = c * acc + base;
        local += std::abs(next[v] - current[v]);
      }
      chunk_residual[chunk] = local;
    });

    double residual = 0.0;
    for (double r : chunk_residual) residual += r;
    current.swap(next);
    result.iterations = iter;
    result.residual = residual;
    result.residual_history.push_back(residual);
    if (residual <= tol_total) {
      result.converged = true;
      break;
    }
  }
  result.values = std::move(current);
  return result;
}

DegreeHistograms degree_histograms(const DirectedGraph& g) {
  if (g.node_count() == 0) throw ParameterError("degree histogram of an empty graph");
  DegreeHistograms h;
  h.in.source = "in_degree";
  h.out.source = "out_degree";
  h.in.values.reserve(g.node_count());
  h.out.values.reserve(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    h.in.values.push_back(static_cast<double>(g.in_degree(v)));
    h.out.values.push_back(static_cast<double>(g.out_degree(v)));
  }
  h.mean_out = static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
  return h;
}

void write_pagerank(std::ostream& out, const PageRankVector& pr,
                    std::span<const std::uint64_t> ids) {
  out.precision(17);
  out << "# c: " << pr.c << '\n'
      << "# iterations: " << pr.iterations << '\n'
      << "# residual: " << pr.residual << '\n'
      << "# converged: " << (pr.converged ? "true" : "false") << '\n';
  for (std::size_t v = 0; v < pr.values.size(); ++v) {
    out << (ids.empty() ? static_cast<std::uint64_t>(v) : ids[v]) << ' ' << pr.values[v] << '\n';
  }
}

}  // namespace prtail
