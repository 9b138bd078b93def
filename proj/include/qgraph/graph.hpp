#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace qgraph {

using VertexId = int;
using EdgeId = int;

/// Undirected edge, stored with u < v. This also fixes the edge orientation
/// used for edge coordinates: x = 0 at u, x = length at v.
struct Edge {
  VertexId u;
  VertexId v;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Simple, connected, undirected graph. Validated on construction.
class CombinatorialGraph {
 public:
  /// Throws Error{DuplicateEdge, SelfLoop, Disconnected, VertexOutOfRange, InvalidParams}.
  CombinatorialGraph(int vertex_count, std::span<const std::pair<int, int>> edges);

  [[nodiscard]] int vertex_count() const noexcept { return vertex_count_; }
  [[nodiscard]] int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
  [[nodiscard]] const Edge& edge(EdgeId e) const { return edges_.at(e); }
  [[nodiscard]] int degree(VertexId v) const { return static_cast<int>(incidence_.at(v).size()); }
  [[nodiscard]] std::span<const EdgeId> incident_edges(VertexId v) const { return incidence_.at(v); }
  [[nodiscard]] VertexId opposite(EdgeId e, VertexId v) const;

 private:
  int vertex_count_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> incidence_;
};

CombinatorialGraph build_graph(int vertex_count, std::span<const std::pair<int, int>> edges);

/// Combinatorial graph with a positive finite length per edge.
class MetricGraph {
 public:
  /// Throws Error{NonPositiveLength, LengthCountMismatch}.
  MetricGraph(CombinatorialGraph graph, std::vector<double> lengths);

  [[nodiscard]] const CombinatorialGraph& graph() const noexcept { return graph_; }
  [[nodiscard]] const std::vector<double>& lengths() const noexcept { return lengths_; }
  [[nodiscard]] double length(EdgeId e) const { return lengths_.at(e); }
  [[nodiscard]] int vertex_count() const noexcept { return graph_.vertex_count(); }
  [[nodiscard]] int edge_count() const noexcept { return graph_.edge_count(); }
  [[nodiscard]] double total_length() const;
  [[nodiscard]] double min_length() const;
  [[nodiscard]] double max_length() const;

 private:
  CombinatorialGraph graph_;
  std::vector<double> lengths_;
};

MetricGraph assign_lengths(const CombinatorialGraph& graph, std::vector<double> lengths);

/// Metric graph obtained by inserting artificial degree-2 vertices on the
/// edges of an original graph. Original vertices keep their indices
/// 0..n-1; artificial vertices follow, grouped by original edge.
class ExtendedGraph {
 public:
  [[nodiscard]] const MetricGraph& metric() const noexcept { return metric_; }
  [[nodiscard]] int original_vertex_count() const noexcept { return original_vertex_count_; }
  [[nodiscard]] int original_edge_count() const noexcept { return static_cast<int>(chains_.size()); }
  /// Original edge that sub-edge e subdivides.
  [[nodiscard]] EdgeId origin_edge(EdgeId e) const { return origin_edge_.at(e); }
  /// Original vertex index, or nullopt for an artificial vertex.
  [[nodiscard]] std::optional<VertexId> original_vertex(VertexId v) const;
  /// N_e for original edge e.
  [[nodiscard]] int subdivisions(EdgeId original) const { return static_cast<int>(chains_.at(original).size()) - 1; }
  [[nodiscard]] const std::vector<int>& subdivision_counts() const noexcept { return subdivisions_; }
  /// Vertex sequence along original edge e, from its u endpoint to its v endpoint.
  [[nodiscard]] std::span<const VertexId> chain(EdgeId original) const { return chains_.at(original); }

 private:
  friend ExtendedGraph extend(const MetricGraph&, std::span<const int>);
  friend ExtendedGraph extend_equilateral(const CombinatorialGraph&, std::span<const int>, double);

  ExtendedGraph(MetricGraph metric, int original_vertex_count, std::vector<EdgeId> origin_edge,
                std::vector<int> subdivisions, std::vector<std::vector<VertexId>> chains);

  MetricGraph metric_;
  int original_vertex_count_;
  std::vector<EdgeId> origin_edge_;
  std::vector<int> subdivisions_;
  std::vector<std::vector<VertexId>> chains_;
};

/// Replaces edge e by N_e sub-edges of length l_e / N_e.
ExtendedGraph extend(const MetricGraph& graph, std::span<const int> subdivisions);

/// Equilateral extension: every sub-edge has length exactly `step`, so the
/// cleaned length of edge e is step * N_e.
ExtendedGraph extend_equilateral(const CombinatorialGraph& graph, std::span<const int> subdivisions,
                                 double step);

struct CleaningResult {
  MetricGraph graph;
  /// Index of each cleaned vertex in the input graph.
  std::vector<VertexId> vertex_origin;
};

/// Removes every degree-2 vertex, merging its two incident edges.
/// Throws Error{AllDegreeTwo} for a pure cycle and Error{NonSimpleResult}
/// when merging would create a loop or a parallel edge.
CleaningResult clean_with_map(const MetricGraph& graph);
MetricGraph clean(const MetricGraph& graph);

/// Removes only the artificial vertices; recovers the original graph.
MetricGraph collapse(const ExtendedGraph& extended);

/// Exact equilateral representation of a graph whose lengths lie on the
/// 10^-digits grid: step = gcd of the scaled integer lengths.
/// Throws Error{NotRepresentable}.
struct GcdRepresentation {
  ExtendedGraph extended;
  double step;
  std::vector<std::int64_t> scaled_lengths;
};
GcdRepresentation gcd_representation(const MetricGraph& graph, int decimal_digits);

}  // namespace qgraph
