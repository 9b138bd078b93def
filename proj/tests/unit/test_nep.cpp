#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../oracles.hpp"
#include "qgraph/equilateral.hpp"
#include "qgraph/error.hpp"
#include "qgraph/generators.hpp"
#include "qgraph/nep.hpp"

using namespace qgraph;

namespace {

constexpr double kPi = std::numbers::pi;

MetricGraph path12() {
  std::vector<std::pair<int, int>> e{{0, 1}, {1, 2}};
  return MetricGraph(CombinatorialGraph(3, e), {1.0, 2.0});
}

MetricGraph star3() {
  std::vector<std::pair<int, int>> e{{0, 1}, {0, 2}, {0, 3}};
  return MetricGraph(CombinatorialGraph(4, e), {1.0, 1.0, 1.0});
}

MetricGraph single(double l) {
  std::vector<std::pair<int, int>> e{{0, 1}};
  return MetricGraph(CombinatorialGraph(2, e), {l});
}

MetricGraph seeded(GraphKind kind, GeneratorParams p, std::uint64_t seed, int decimals) {
  Rng rng(seed);
  CombinatorialGraph g = generate(kind, p, rng);
  auto lengths = random_lengths(g.edge_count(), {1.0, 2.0, decimals}, rng);
  return MetricGraph(std::move(g), std::move(lengths));
}

}  // namespace

TEST_CASE("H on a single edge and on path(1,2)") {
  const DenseMatrix h = DenseMatrix(assemble_H(single(1.0), kPi * kPi / 4));
  CHECK(std::abs(h(0, 0)) < 1e-15);
  CHECK(h(0, 1) == doctest::Approx(1.0));

  const double z = kPi * kPi / 9;
  const DenseMatrix p = DenseMatrix(assemble_H(path12(), z));
  const double r3 = std::sqrt(3.0);
  DenseMatrix want(3, 3);
  want << -1 / r3, 2 / r3, 0, 2 / r3, 0, 2 / r3, 0, 2 / r3, 1 / r3;
  CHECK((p - want).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(std::abs(p.determinant()) < 1e-14);
  CHECK((p - oracle::h_matrix(path12(), z)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("H near a pole is rejected with the edge index") {
  try {
    assemble_H(path12(), kPi * kPi / 4 * (1 + 1e-12));
    FAIL("expected NearSingularEdge");
  } catch (const NearSingularEdgeError& e) {
    CHECK(e.code() == ErrorCode::NearSingularEdge);
    CHECK(e.edge() == 1);
  }
  CHECK_THROWS_AS(assemble_H(path12(), -1.0), Error);
}

TEST_CASE("H prime closed form and finite differences") {
  const DenseMatrix d = DenseMatrix(assemble_H_prime(single(1.0), kPi * kPi / 4));
  CHECK(d(0, 0) == doctest::Approx(1.0 / kPi));
  CHECK(std::abs(d(0, 1)) < 1e-15);

  int checked = 0;
  for (std::uint64_t seed = 1; checked < 20; ++seed) {
    const auto g = seeded(GraphKind::barabasi_albert, {8, 2}, seed, 3);
    Rng rng(seed * 31);
    const double z = 0.5 + 20.0 * rng.uniform01();
    bool near_pole = false;
    for (double l : g.lengths()) near_pole = near_pole || std::abs(std::sin(std::sqrt(z) * l)) < 0.05;
    if (near_pole) continue;
    const DenseMatrix an = DenseMatrix(assemble_H_prime(g, z));
    const DenseMatrix fd = oracle::h_derivative_fd(g, z, 1e-6 * z);
    CHECK((an - an.transpose()).norm() == 0.0);
    CHECK((an - fd).cwiseAbs().maxCoeff() <= 1e-6 * an.cwiseAbs().maxCoeff());
    ++checked;
  }
}

TEST_CASE("rcond") {
  CHECK(rcond(DenseMatrix(DenseMatrix::Identity(4, 4))) == doctest::Approx(1.0));
  DenseMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK(rcond(swap) == doctest::Approx(1.0));
  CHECK(rcond(DenseMatrix(DenseMatrix::Zero(3, 3))) == 0.0);
  DenseMatrix diag = DenseMatrix::Identity(3, 3);
  diag(2, 2) = 1e-6;
  CHECK(rcond(diag) == doctest::Approx(1e-6));
  // 1-norm estimate path for large orders stays within a factor of n of the 2-norm value.
  const SparseMatrix big = assemble_H(seeded(GraphKind::barabasi_albert, {260, 2}, 3, 3), 2.0);
  const double est = rcond(big);
  const double exact = rcond(DenseMatrix(big));
  CHECK(est > 0.0);
  CHECK(est <= exact * 260);
  CHECK(est >= exact / 260);
}

TEST_CASE("Newton-trace step and iteration") {
  const double root = kPi * kPi / 9;
  const double next = newton_trace_step(path12(), 1.05);
  CHECK(std::abs(next - root) < std::abs(1.05 - root));

  const NewtonResult p = solve_newton_trace(path12(), 1.0);
  CHECK(p.status == NewtonStatus::converged);
  CHECK(p.lambda == doctest::Approx(root).epsilon(1e-9));
  CHECK(p.iterations <= 10);
  CHECK(p.final_rcond < 1e-10);
  CHECK(p.trace_history.front() == 1.0);
  CHECK(static_cast<int>(p.trace_history.size()) == p.iterations + 1);

  const NewtonResult s = solve_newton_trace(star3(), 2.3);
  CHECK(s.status == NewtonStatus::converged);
  CHECK(s.lambda == doctest::Approx(kPi * kPi / 4).epsilon(1e-9));

  const NewtonResult e = solve_newton_trace(single(1.0), 1.0);
  CHECK(e.status == NewtonStatus::max_iterations);
  CHECK(e.iterations == 1000);

  const NewtonResult pole = solve_newton_trace(path12(), kPi * kPi);
  CHECK(pole.status == NewtonStatus::singularity_encountered);
  CHECK(pole.iterations == 0);
}

TEST_CASE("Newton-trace is deterministic") {
  const auto g = seeded(GraphKind::barabasi_albert, {30, 2}, 4, 2);
  const auto a = solve_newton_trace(g, 0.3);
  const auto b = solve_newton_trace(g, 0.3);
  CHECK(a.trace_history == b.trace_history);
  CHECK(a.lambda == b.lambda);
}

TEST_CASE("single edge determinant is -1") {
  const auto g = single(1.0);
  for (int i = 1; i <= 100; ++i) {
    const double z = 9.5 * i / 100.0;
    if (std::abs(std::sin(std::sqrt(z))) < 1e-6) continue;
    CHECK(DenseMatrix(assemble_H(g, z)).determinant() == doctest::Approx(-1.0).epsilon(1e-10));
  }
}

TEST_CASE("null space") {
  const DenseMatrix v = nullvector(path12(), kPi * kPi / 9);
  REQUIRE(v.cols() == 1);
  const Vector phi = v.col(0) / v(0, 0);
  CHECK(phi(1) == doctest::Approx(0.5));
  CHECK(phi(2) == doctest::Approx(-1.0));

  const NullSpace ns = null_space(star3(), kPi * kPi / 4);
  CHECK(ns.basis.cols() == 2);
  const DenseMatrix h = DenseMatrix(assemble_H(star3(), kPi * kPi / 4));
  for (int j = 0; j < 2; ++j) CHECK((h * ns.basis.col(j)).norm() <= 1e-8 * h.norm());
  CHECK_THROWS_AS(nullvector(path12(), 2.0), Error);
}

TEST_CASE("counting oracle on known spectra") {
  // Single edge: only 0 below pi^2, then one per (k pi)^2.
  CHECK(oracle::count_below(single(1.0), 1.0) == 1);
  CHECK(oracle::count_below(single(1.0), 15.0) == 2);
  // Star K_{1,3}: 0 < (pi/2)^2 double < pi^2 < (3pi/2)^2 double.
  CHECK(oracle::count_below(star3(), 2.0) == 1);
  CHECK(oracle::count_below(star3(), 3.0) == 3);
  // Interval of length 3 via path(1, 2).
  for (int k = 0; k < 8; ++k) {
    const double z = std::pow((k + 0.5) * kPi / 3.0, 2);
    if (std::abs(std::sin(std::sqrt(z))) < 1e-3 || std::abs(std::sin(2 * std::sqrt(z))) < 1e-3) continue;
    CHECK(oracle::count_below(path12(), z) == k + 1);
  }
}

TEST_CASE("Newton roots lie in the reference spectrum") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto g = seeded(GraphKind::barabasi_albert, {10, 2}, seed, 2);
    const auto ref = equilateral_spectrum(exact_representation(g, 2), 12).vertex_values();
    const auto guesses = initial_guesses(g, 0.125, 8);
    for (const auto& guess : guesses) {
      if (guess.q == 1) continue;
      const auto r = solve_newton_trace(g, guess.init);
      if (r.status != NewtonStatus::converged) continue;
      CHECK(r.final_rcond < 1e-10);
      double best = 1e300;
      for (double v : ref) best = std::min(best, oracle::relative_error(v, r.lambda));
      CHECK(best < 1e-6);
    }
  }
}

TEST_CASE("subdividing edges leaves Newton roots unchanged") {
  const auto g = seeded(GraphKind::star, {5, 0}, 3, 3);
  const std::vector<int> n{2, 3, 1, 2};
  const MetricGraph ext = extend(g, n).metric();
  for (double z0 : {0.4, 1.3, 3.0}) {
    const auto a = solve_newton_trace(g, z0);
    const auto b = solve_newton_trace(ext, a.lambda * (1 + 1e-7));
    if (a.status != NewtonStatus::converged) continue;
    REQUIRE(b.status == NewtonStatus::converged);
    CHECK(oracle::relative_error(a.lambda, b.lambda) < 1e-8);
  }
}
