#pragma once

#include <filesystem>
#include <string>

#include "qgraph/graph.hpp"

namespace qgraph {

// Graph file format (JSON, 0-based vertex indices):
//   { "n": int, "edges": [[i, j], ...], "lengths": [real, ...] }
// lengths[e] belongs to edges[e].

std::string graph_to_json(const MetricGraph& graph);
MetricGraph graph_from_json(const std::string& text);

void write_graph(const std::filesystem::path& path, const MetricGraph& graph);
MetricGraph read_graph(const std::filesystem::path& path);

}  // namespace qgraph
