#include "qgraph/generators.hpp"

#include <cmath>
#include <string>

#include "qgraph/error.hpp"

namespace qgraph {

std::string_view to_string(GraphKind kind) noexcept {
  switch (kind) {
    case GraphKind::star: return "star";
    case GraphKind::path: return "path";
    case GraphKind::cycle: return "cycle";
    case GraphKind::diamond: return "diamond";
    case GraphKind::barabasi_albert: return "barabasi_albert";
  }
  return "unknown";
}

GraphKind parse_graph_kind(std::string_view name) {
  if (name == "star") return GraphKind::star;
  if (name == "path") return GraphKind::path;
  if (name == "cycle") return GraphKind::cycle;
  if (name == "diamond") return GraphKind::diamond;
  if (name == "ba" || name == "barabasi_albert") return GraphKind::barabasi_albert;
  throw Error(ErrorCode::InvalidParams, "unknown graph kind '" + std::string(name) + "'");
}

namespace {

using EdgeList = std::vector<std::pair<int, int>>;

EdgeList barabasi_albert(int n, int k, Rng& rng) {
  EdgeList edges;
  edges.reserve(static_cast<std::size_t>(n - k) * k);
  std::vector<std::uint64_t> degree(n, 0);
  for (int t = 0; t < k; ++t) edges.emplace_back(t, k);
  for (int t = 0; t < k; ++t) ++degree[t];
  degree[k] = k;

  std::vector<char> chosen(n, 0);
  std::vector<int> targets;
  for (int v = k + 1; v < n; ++v) {
    targets.clear();
    std::uint64_t total = 0;
    for (int w = 0; w < v; ++w) total += degree[w];
    for (int j = 0; j < k; ++j) {
      std::uint64_t r = rng.below(total);
      int w = 0;
      for (;; ++w) {
        if (chosen[w]) continue;
        if (r < degree[w]) break;
        r -= degree[w];
      }
      chosen[w] = 1;
      total -= degree[w];
      targets.push_back(w);
    }
    for (int w : targets) {
      chosen[w] = 0;
      edges.emplace_back(w, v);
      ++degree[w];
    }
    degree[v] = k;
  }
  return edges;
}

}  // namespace

CombinatorialGraph generate(GraphKind kind, GeneratorParams params, Rng& rng) {
  const int n = params.n;
  EdgeList edges;
  switch (kind) {
    case GraphKind::star:
      if (n < 2) throw Error(ErrorCode::InvalidParams, "star needs n >= 2");
      for (int v = 1; v < n; ++v) edges.emplace_back(0, v);
      return CombinatorialGraph(n, edges);
    case GraphKind::path:
      if (n < 2) throw Error(ErrorCode::InvalidParams, "path needs n >= 2");
      for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
      return CombinatorialGraph(n, edges);
    case GraphKind::cycle:
      if (n < 3) throw Error(ErrorCode::InvalidParams, "cycle needs n >= 3");
      for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
      edges.emplace_back(n - 1, 0);
      return CombinatorialGraph(n, edges);
    case GraphKind::diamond:
      if (n != 0 && n != 4) throw Error(ErrorCode::InvalidParams, "diamond has exactly 4 vertices");
      edges = {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}};
      return CombinatorialGraph(4, edges);
    case GraphKind::barabasi_albert:
      if (params.k < 1 || params.k >= n)
        throw Error(ErrorCode::InvalidParams, "barabasi_albert needs 1 <= k < n");
      return CombinatorialGraph(n, barabasi_albert(n, params.k, rng));
  }
  throw Error(ErrorCode::InvalidParams, "unknown graph kind");
}

CombinatorialGraph generate(GraphKind kind, GeneratorParams params, std::uint64_t seed) {
  Rng rng(seed);
  return generate(kind, params, rng);
}

std::vector<double> random_lengths(int count, const LengthSpec& spec, Rng& rng) {
  if (!(spec.lo > 0.0) || !(spec.hi >= spec.lo) || !std::isfinite(spec.hi))
    throw Error(ErrorCode::InvalidParams, "length interval must satisfy 0 < lo <= hi");
  std::vector<double> out;
  out.reserve(count);
  if (spec.decimals) {
    if (*spec.decimals < 0 || *spec.decimals > 12) throw Error(ErrorCode::InvalidParams, "decimals in [0, 12]");
    const double scale = std::pow(10.0, *spec.decimals);
    const auto a = static_cast<std::int64_t>(std::llround(spec.lo * scale));
    const auto b = static_cast<std::int64_t>(std::llround(spec.hi * scale));
    if (a < 1) throw Error(ErrorCode::InvalidParams, "lower bound rounds to zero on the grid");
    const auto width = static_cast<std::uint64_t>(b - a + 1);
    for (int i = 0; i < count; ++i)
      out.push_back(static_cast<double>(a + static_cast<std::int64_t>(rng.below(width))) / scale);
  } else {
    for (int i = 0; i < count; ++i) out.push_back(spec.lo + (spec.hi - spec.lo) * rng.uniform01());
  }
  return out;
}

}  // namespace qgraph
