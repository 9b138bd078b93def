#include "qgraph/graph_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "qgraph/error.hpp"

namespace qgraph {

using nlohmann::json;

std::string graph_to_json(const MetricGraph& graph) {
  json edges = json::array();
  for (const Edge& e : graph.graph().edges()) edges.push_back({e.u, e.v});
  json doc;
  doc["n"] = graph.vertex_count();
  doc["edges"] = std::move(edges);
  doc["lengths"] = graph.lengths();
  return doc.dump(2) + "\n";
}

MetricGraph graph_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Io, std::string("malformed graph JSON: ") + e.what());
  }
  try {
    const int n = doc.at("n").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::Io, "edges must be pairs");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    auto lengths = doc.at("lengths").get<std::vector<double>>();
    return MetricGraph(CombinatorialGraph(n, edges), std::move(lengths));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, std::string("invalid graph JSON: ") + e.what());
  }
}

void write_graph(const std::filesystem::path& path, const MetricGraph& graph) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << graph_to_json(graph);
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

MetricGraph read_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return graph_from_json(buffer.str());
}

}  // namespace qgraph
