#include "qgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "qgraph/error.hpp"

namespace qgraph {

namespace {

std::string edge_text(int u, int v) {
  std::ostringstream os;
  os << "(" << u << ", " << v << ")";
  return os.str();
}

bool is_connected(int n, const std::vector<std::vector<EdgeId>>& incidence, const std::vector<Edge>& edges) {
  std::vector<char> seen(n, 0);
  std::vector<VertexId> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    for (EdgeId e : incidence[v]) {
      const VertexId w = edges[e].u == v ? edges[e].v : edges[e].u;
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

}  // namespace

CombinatorialGraph::CombinatorialGraph(int vertex_count, std::span<const std::pair<int, int>> edges)
    : vertex_count_(vertex_count) {
  if (vertex_count < 1) throw Error(ErrorCode::InvalidParams, "vertex count must be >= 1");
  if (vertex_count > 1 && edges.empty()) throw Error(ErrorCode::Disconnected, "graph has no edges");
  edges_.reserve(edges.size());
  incidence_.resize(vertex_count);
  std::set<std::pair<int, int>> seen;
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= vertex_count || b >= vertex_count)
      throw Error(ErrorCode::VertexOutOfRange, "edge " + edge_text(a, b));
    if (a == b) throw Error(ErrorCode::SelfLoop, "edge " + edge_text(a, b));
    const Edge e{std::min(a, b), std::max(a, b)};
    if (!seen.emplace(e.u, e.v).second) throw Error(ErrorCode::DuplicateEdge, "edge " + edge_text(a, b));
    const auto id = static_cast<EdgeId>(edges_.size());
    edges_.push_back(e);
    incidence_[e.u].push_back(id);
    incidence_[e.v].push_back(id);
  }
  if (!is_connected(vertex_count_, incidence_, edges_))
    throw Error(ErrorCode::Disconnected, "graph has more than one component");
}

VertexId CombinatorialGraph::opposite(EdgeId e, VertexId v) const {
  const Edge& ed = edges_.at(e);
  return ed.u == v ? ed.v : ed.u;
}

CombinatorialGraph build_graph(int vertex_count, std::span<const std::pair<int, int>> edges) {
  return CombinatorialGraph(vertex_count, edges);
}

MetricGraph::MetricGraph(CombinatorialGraph graph, std::vector<double> lengths)
    : graph_(std::move(graph)), lengths_(std::move(lengths)) {
  if (static_cast<int>(lengths_.size()) != graph_.edge_count()) {
    std::ostringstream os;
    os << lengths_.size() << " lengths for " << graph_.edge_count() << " edges";
    throw Error(ErrorCode::LengthCountMismatch, os.str());
  }
  for (std::size_t e = 0; e < lengths_.size(); ++e) {
    if (!(lengths_[e] > 0.0) || !std::isfinite(lengths_[e])) {
      std::ostringstream os;
      os << "edge " << e << " has length " << lengths_[e];
      throw Error(ErrorCode::NonPositiveLength, os.str());
    }
  }
}

double MetricGraph::total_length() const {
  return std::accumulate(lengths_.begin(), lengths_.end(), 0.0);
}

double MetricGraph::min_length() const { return *std::min_element(lengths_.begin(), lengths_.end()); }

double MetricGraph::max_length() const { return *std::max_element(lengths_.begin(), lengths_.end()); }

MetricGraph assign_lengths(const CombinatorialGraph& graph, std::vector<double> lengths) {
  return MetricGraph(graph, std::move(lengths));
}

ExtendedGraph::ExtendedGraph(MetricGraph metric, int original_vertex_count, std::vector<EdgeId> origin_edge,
                             std::vector<int> subdivisions, std::vector<std::vector<VertexId>> chains)
    : metric_(std::move(metric)),
      original_vertex_count_(original_vertex_count),
      origin_edge_(std::move(origin_edge)),
      subdivisions_(std::move(subdivisions)),
      chains_(std::move(chains)) {}

std::optional<VertexId> ExtendedGraph::original_vertex(VertexId v) const {
  if (v < 0 || v >= metric_.vertex_count()) throw Error(ErrorCode::OutOfRange, "vertex index");
  if (v < original_vertex_count_) return v;
  return std::nullopt;
}

namespace {

struct Subdivision {
  int vertex_count;
  std::vector<std::pair<int, int>> edges;
  std::vector<EdgeId> origin;
  std::vector<std::vector<VertexId>> chains;
};

Subdivision subdivide(const CombinatorialGraph& graph, std::span<const int> subdivisions) {
  if (static_cast<int>(subdivisions.size()) != graph.edge_count())
    throw Error(ErrorCode::LengthCountMismatch, "one subdivision count per edge required");
  Subdivision out;
  int next = graph.vertex_count();
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    const int count = subdivisions[e];
    if (count < 1) throw Error(ErrorCode::InvalidParams, "subdivision counts must be >= 1");
    const Edge& ed = graph.edge(e);
    std::vector<VertexId> chain;
    chain.reserve(count + 1);
    chain.push_back(ed.u);
    for (int j = 1; j < count; ++j) chain.push_back(next++);
    chain.push_back(ed.v);
    for (int j = 0; j < count; ++j) {
      out.edges.emplace_back(chain[j], chain[j + 1]);
      out.origin.push_back(e);
    }
    out.chains.push_back(std::move(chain));
  }
  out.vertex_count = next;
  return out;
}

}  // namespace

ExtendedGraph extend(const MetricGraph& graph, std::span<const int> subdivisions) {
  Subdivision sub = subdivide(graph.graph(), subdivisions);
  std::vector<double> lengths;
  lengths.reserve(sub.edges.size());
  for (EdgeId e : sub.origin) lengths.push_back(graph.length(e) / subdivisions[e]);
  MetricGraph metric(CombinatorialGraph(sub.vertex_count, sub.edges), std::move(lengths));
  return ExtendedGraph(std::move(metric), graph.vertex_count(), std::move(sub.origin),
                       std::vector<int>(subdivisions.begin(), subdivisions.end()), std::move(sub.chains));
}

ExtendedGraph extend_equilateral(const CombinatorialGraph& graph, std::span<const int> subdivisions,
                                 double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw Error(ErrorCode::InvalidParams, "step must be positive");
  Subdivision sub = subdivide(graph, subdivisions);
  std::vector<double> lengths(sub.edges.size(), step);
  MetricGraph metric(CombinatorialGraph(sub.vertex_count, sub.edges), std::move(lengths));
  return ExtendedGraph(std::move(metric), graph.vertex_count(), std::move(sub.origin),
                       std::vector<int>(subdivisions.begin(), subdivisions.end()), std::move(sub.chains));
}

CleaningResult clean_with_map(const MetricGraph& graph) {
  const CombinatorialGraph& g = graph.graph();
  const int n = g.vertex_count();
  std::vector<int> new_index(n, -1);
  std::vector<VertexId> kept;
  for (VertexId v = 0; v < n; ++v) {
    if (g.degree(v) != 2) {
      new_index[v] = static_cast<int>(kept.size());
      kept.push_back(v);
    }
  }
  if (kept.empty()) throw Error(ErrorCode::AllDegreeTwo, "a pure cycle cannot be cleaned");

  std::vector<char> used(g.edge_count(), 0);
  std::vector<std::pair<int, int>> edges;
  std::vector<double> lengths;
  std::set<std::pair<int, int>> present;
  for (VertexId start : kept) {
    for (EdgeId first : g.incident_edges(start)) {
      if (used[first]) continue;
      // Walk through degree-2 vertices until the next kept vertex.
      double length = 0.0;
      EdgeId e = first;
      VertexId at = start;
      while (true) {
        used[e] = 1;
        length += graph.length(e);
        at = g.opposite(e, at);
        if (new_index[at] >= 0) break;
        const auto inc = g.incident_edges(at);
        e = inc[0] == e ? inc[1] : inc[0];
      }
      const int a = new_index[start];
      const int b = new_index[at];
      if (a == b) throw Error(ErrorCode::NonSimpleResult, "cleaning produces a loop");
      if (!present.emplace(std::min(a, b), std::max(a, b)).second)
        throw Error(ErrorCode::NonSimpleResult, "cleaning produces parallel edges");
      edges.emplace_back(a, b);
      lengths.push_back(length);
    }
  }
  return CleaningResult{MetricGraph(CombinatorialGraph(static_cast<int>(kept.size()), edges), std::move(lengths)),
                        std::move(kept)};
}

MetricGraph clean(const MetricGraph& graph) { return clean_with_map(graph).graph; }

MetricGraph collapse(const ExtendedGraph& extended) {
  const MetricGraph& m = extended.metric();
  std::vector<double> lengths(extended.original_edge_count(), 0.0);
  for (EdgeId e = 0; e < m.edge_count(); ++e) lengths[extended.origin_edge(e)] += m.length(e);
  std::vector<std::pair<int, int>> edges;
  edges.reserve(extended.original_edge_count());
  for (EdgeId e = 0; e < extended.original_edge_count(); ++e) {
    const auto chain = extended.chain(e);
    edges.emplace_back(chain.front(), chain.back());
  }
  return MetricGraph(CombinatorialGraph(extended.original_vertex_count(), edges), std::move(lengths));
}

GcdRepresentation gcd_representation(const MetricGraph& graph, int decimal_digits) {
  if (decimal_digits < 0 || decimal_digits > 12)
    throw Error(ErrorCode::InvalidParams, "decimal digits must lie in [0, 12]");
  const double scale = std::pow(10.0, decimal_digits);
  std::vector<std::int64_t> scaled;
  scaled.reserve(graph.edge_count());
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    const double x = graph.length(e) * scale;
    const double r = std::round(x);
    if (std::abs(x - r) > 1e-9 * std::max(1.0, r) || r < 1.0) {
      std::ostringstream os;
      os.precision(17);
      os << "length " << graph.length(e) << " of edge " << e << " is not on the 1e-" << decimal_digits << " grid";
      throw Error(ErrorCode::NotRepresentable, os.str());
    }
    scaled.push_back(static_cast<std::int64_t>(r));
  }
  std::int64_t divisor = 0;
  for (std::int64_t k : scaled) divisor = std::gcd(divisor, k);
  std::vector<int> counts;
  counts.reserve(scaled.size());
  for (std::int64_t k : scaled) counts.push_back(static_cast<int>(k / divisor));
  const double step = static_cast<double>(divisor) / scale;
  return GcdRepresentation{extend_equilateral(graph.graph(), counts, step), step, std::move(scaled)};
}

}  // namespace qgraph
