#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "qgraph/error.hpp"
#include "qgraph/generators.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/graph_io.hpp"

using namespace qgraph;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Io;
}

MetricGraph make(int n, std::vector<std::pair<int, int>> edges, std::vector<double> lengths) {
  return MetricGraph(CombinatorialGraph(n, edges), std::move(lengths));
}

}  // namespace

TEST_CASE("combinatorial graph validation") {
  std::vector<std::pair<int, int>> loop{{0, 0}};
  std::vector<std::pair<int, int>> dup{{0, 1}, {1, 0}};
  std::vector<std::pair<int, int>> split{{0, 1}, {2, 3}};
  std::vector<std::pair<int, int>> range{{0, 4}};
  CHECK(code_of([&] { CombinatorialGraph(1, loop); }) == ErrorCode::SelfLoop);
  CHECK(code_of([&] { CombinatorialGraph(2, dup); }) == ErrorCode::DuplicateEdge);
  CHECK(code_of([&] { CombinatorialGraph(4, split); }) == ErrorCode::Disconnected);
  CHECK(code_of([&] { CombinatorialGraph(2, range); }) == ErrorCode::VertexOutOfRange);

  std::vector<std::pair<int, int>> edges{{2, 0}, {0, 1}};
  CombinatorialGraph g(3, edges);
  CHECK(g.edge(0) == Edge{0, 2});
  CHECK(g.degree(0) == 2);
  CHECK(g.opposite(0, 2) == 0);
}

TEST_CASE("metric graph validation") {
  std::vector<std::pair<int, int>> e{{0, 1}};
  CHECK(code_of([&] { MetricGraph(CombinatorialGraph(2, e), {0.0}); }) == ErrorCode::NonPositiveLength);
  CHECK(code_of([&] { MetricGraph(CombinatorialGraph(2, e), {1.0, 2.0}); }) == ErrorCode::LengthCountMismatch);
  const auto g = make(3, {{0, 1}, {1, 2}}, {1.0, 2.5});
  CHECK(g.total_length() == doctest::Approx(3.5));
  CHECK(g.min_length() == 1.0);
  CHECK(g.max_length() == 2.5);
}

TEST_CASE("extend, clean and collapse") {
  const auto g = make(3, {{0, 1}, {1, 2}}, {2.0, 4.0});
  const std::vector<int> n{2, 4};
  const ExtendedGraph ext = extend(g, n);
  CHECK(ext.metric().vertex_count() == 3 + 1 + 3);
  CHECK(ext.metric().edge_count() == 6);
  CHECK(ext.metric().total_length() == doctest::Approx(6.0).epsilon(1e-14));
  for (int v = 3; v < ext.metric().vertex_count(); ++v) {
    CHECK(ext.metric().graph().degree(v) == 2);
    CHECK_FALSE(ext.original_vertex(v).has_value());
  }
  CHECK(ext.chain(1).front() == 1);
  CHECK(ext.chain(1).back() == 2);
  CHECK(ext.subdivisions(1) == 4);

  const MetricGraph back = collapse(ext);
  CHECK(back.graph().edges() == g.graph().edges());
  CHECK(back.length(0) == doctest::Approx(2.0));
  CHECK(back.length(1) == doctest::Approx(4.0));

  // Cleaning the path removes the middle vertex: one edge of length 6.
  const MetricGraph cleaned = clean(ext.metric());
  CHECK(cleaned.vertex_count() == 2);
  CHECK(cleaned.edge_count() == 1);
  CHECK(cleaned.length(0) == doctest::Approx(6.0));
}

TEST_CASE("cleaning failures") {
  const auto cycle = make(3, {{0, 1}, {1, 2}, {2, 0}}, {1, 1, 1});
  CHECK(code_of([&] { clean(cycle); }) == ErrorCode::AllDegreeTwo);
  // Two parallel paths between vertices of degree 3 would merge into parallel edges.
  const auto theta = make(5, {{0, 1}, {1, 4}, {0, 2}, {2, 4}, {0, 3}, {3, 4}}, {1, 1, 1, 1, 1, 1});
  CHECK(code_of([&] { clean(theta); }) == ErrorCode::NonSimpleResult);
}

TEST_CASE("equilateral extension from the gcd") {
  const auto g = make(4, {{0, 1}, {0, 2}, {0, 3}}, {2.0, 4.0, 6.0});
  const GcdRepresentation rep = gcd_representation(g, 0);
  CHECK(rep.step == doctest::Approx(2.0));
  CHECK(rep.extended.subdivision_counts() == std::vector<int>{1, 2, 3});
  for (double l : rep.extended.metric().lengths()) CHECK(l == 2.0);

  const auto h = make(3, {{0, 1}, {1, 2}}, {1.25, 0.5});
  const auto r3 = gcd_representation(h, 3);
  CHECK(r3.step == doctest::Approx(0.25));
  CHECK(r3.scaled_lengths == std::vector<std::int64_t>{1250, 500});
  CHECK(code_of([&] { gcd_representation(h, 1); }) == ErrorCode::NotRepresentable);
}

TEST_CASE("generators") {
  Rng rng(42);
  CHECK(generate(GraphKind::star, {5, 0}, rng).edge_count() == 4);
  CHECK(generate(GraphKind::path, {5, 0}, rng).edge_count() == 4);
  CHECK(generate(GraphKind::cycle, {4, 0}, rng).edge_count() == 4);
  const auto d = generate(GraphKind::diamond, {4, 0}, rng);
  CHECK(d.edge_count() == 5);
  CHECK(d.degree(0) == 2);
  CHECK(d.degree(3) == 2);
  CHECK(generate(GraphKind::barabasi_albert, {10, 2}, rng).edge_count() == 16);
  CHECK(generate(GraphKind::barabasi_albert, {50, 2}, rng).edge_count() == 96);
  CHECK(generate(GraphKind::barabasi_albert, {500, 3}, rng).edge_count() == 1491);
  CHECK(code_of([&] { generate(GraphKind::cycle, {2, 0}, rng); }) == ErrorCode::InvalidParams);
  CHECK(code_of([&] { generate(GraphKind::barabasi_albert, {5, 5}, rng); }) == ErrorCode::InvalidParams);
  CHECK(parse_graph_kind("ba") == GraphKind::barabasi_albert);
}

TEST_CASE("generators are deterministic per seed") {
  const auto a = generate(GraphKind::barabasi_albert, {60, 3}, 9);
  const auto b = generate(GraphKind::barabasi_albert, {60, 3}, 9);
  const auto c = generate(GraphKind::barabasi_albert, {60, 3}, 10);
  CHECK(a.edges() == b.edges());
  CHECK(a.edges() != c.edges());
}

TEST_CASE("random lengths on a decimal grid") {
  Rng rng(7);
  const auto l = random_lengths(1000, {1.0, 2.0, 3}, rng);
  for (double x : l) {
    CHECK(x >= 1.0);
    CHECK(x <= 2.0);
    CHECK(std::abs(x * 1000 - std::round(x * 1000)) < 1e-9);
  }
  Rng r1(3);
  Rng r2(3);
  CHECK(random_lengths(5, {}, r1) == random_lengths(5, {}, r2));
  CHECK(random_lengths(3, {1.0, 1.0, std::nullopt}, r1) == std::vector<double>{1.0, 1.0, 1.0});
}

TEST_CASE("rng stream is pinned") {
  Rng a(1);
  Rng b(1);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
  Rng c(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(c.below(7) < 7);
  }
}

TEST_CASE("graph JSON round trip") {
  const auto g = make(4, {{0, 1}, {1, 2}, {1, 3}}, {1.25, 0.1, 1.0 / 3.0});
  const std::string text = graph_to_json(g);
  const MetricGraph back = graph_from_json(text);
  CHECK(back.graph().edges() == g.graph().edges());
  CHECK(back.lengths() == g.lengths());
  CHECK(graph_to_json(back) == text);
  CHECK(code_of([] { graph_from_json("{"); }) == ErrorCode::Io);
  CHECK(code_of([] { graph_from_json(R"({"n": 2, "edges": [[0]], "lengths": [1]})"); }) == ErrorCode::Io);
  CHECK(code_of([] { read_graph("/nonexistent/graph.json"); }) == ErrorCode::Io);
}
