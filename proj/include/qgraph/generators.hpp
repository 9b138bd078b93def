#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/rng.hpp"

namespace qgraph {

enum class GraphKind { star, path, cycle, diamond, barabasi_albert };

[[nodiscard]] std::string_view to_string(GraphKind kind) noexcept;
/// Accepts "star", "path", "cycle", "diamond", "ba" / "barabasi_albert".
[[nodiscard]] GraphKind parse_graph_kind(std::string_view name);

struct GeneratorParams {
  int n = 0;
  /// Edges attached per new vertex (Barabasi-Albert only).
  int k = 0;
};

/// Deterministic graph families. Only barabasi_albert consumes randomness.
///
///   star(n)      vertex 0 joined to 1..n-1
///   path(n)      0-1-...-(n-1)
///   cycle(n)     path plus (n-1, 0), n >= 3
///   diamond      K4 minus the edge (0, 3)
///   barabasi_albert(n, k)
///                k isolated seed vertices; vertex k joins all of them, then
///                each further vertex attaches k distinct edges, chosen
///                without replacement with probability proportional to the
///                current degree. m = (n - k) * k.
CombinatorialGraph generate(GraphKind kind, GeneratorParams params, Rng& rng);
CombinatorialGraph generate(GraphKind kind, GeneratorParams params, std::uint64_t seed);

struct LengthSpec {
  double lo = 1.0;
  double hi = 2.0;
  /// Round onto the 10^-decimals grid; nullopt draws continuous values.
  std::optional<int> decimals;
};

/// Uniform lengths in [lo, hi]. With decimals set, draws an integer grid
/// point uniformly from round(lo*10^d)..round(hi*10^d) so the result is
/// exactly on the grid (up to the final division).
std::vector<double> random_lengths(int count, const LengthSpec& spec, Rng& rng);

}  // namespace qgraph
