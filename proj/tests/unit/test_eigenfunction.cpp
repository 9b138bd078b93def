#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qgraph/eigenfunction.hpp"
#include "qgraph/error.hpp"
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

}  // namespace

TEST_CASE("interval eigenfunction on path(1,2)") {
  const double lambda = kPi * kPi / 9;
  Vector phi(3);
  phi << 1.0, 0.5, -1.0;
  const Eigenfunction f = reconstruct(path12(), lambda, phi);
  const double s = f.vertex_values(0);
  // cos(pi x / 3) on [0, 3], scaled to unit norm: sqrt(2/3).
  CHECK(s == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(evaluate(f, 0, 0.5) / s == doctest::Approx(std::cos(kPi / 6)));
  CHECK(evaluate(f, 1, 1.0) / s == doctest::Approx(-0.5));
  CHECK(evaluate(f, 1, 2.0) / s == doctest::Approx(-1.0));
  CHECK(l2_norm(f) == doctest::Approx(1.0).epsilon(1e-12));
  const Residuals r = residuals(f, path12());
  CHECK(r.continuity_gap <= 1e-12);
  CHECK(r.kirchhoff_max <= 1e-10);
  CHECK(r.ode_residual <= 1e-12);
  CHECK_THROWS_AS(evaluate(f, 0, 1.5), Error);
  CHECK_THROWS_AS(evaluate(f, 2, 0.0), Error);
}

TEST_CASE("non-eigenpairs are detected") {
  const double lambda = kPi * kPi / 9;
  Vector phi(3);
  phi << 1.0, 0.5, -1.0;
  CHECK_THROWS_AS(reconstruct(path12(), lambda, Vector::Zero(3)), Error);
  CHECK_THROWS_AS(reconstruct(path12(), lambda * (1 + 1e-3), phi), Error);
  CHECK_THROWS_AS(reconstruct(path12(), kPi * kPi, phi), Error);

  // Bypassing the check: coefficients from Phi at a wrong lambda violate Kirchhoff.
  const Eigenfunction f = reconstruct(path12(), lambda, phi);
  Eigenfunction g = f;
  g.lambda = lambda * (1 + 1e-3);
  const double k = std::sqrt(g.lambda);
  const MetricGraph p = path12();
  for (int e = 0; e < 2; ++e) {
    const auto& edge = p.graph().edge(e);
    const double l = p.length(e);
    g.b[e] = (g.vertex_values(edge.v) - g.vertex_values(edge.u) * std::cos(k * l)) / std::sin(k * l);
  }
  CHECK(residuals(g, p).kirchhoff_max > 1e-4);
}

TEST_CASE("constant eigenfunction") {
  const auto fam = eigenfunctions(path12(), 0.0);
  REQUIRE(fam.size() == 1);
  CHECK(evaluate(fam[0], 1, 0.7) == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(l2_norm(fam[0]) == doctest::Approx(1.0));
}

TEST_CASE("orthonormal family for a double eigenvalue") {
  const double lambda = kPi * kPi / 4;
  const auto fam = eigenfunctions(star3(), lambda);
  REQUIRE(fam.size() == 2);
  CHECK(l2_inner(fam[0], fam[1]) == doctest::Approx(0.0).epsilon(1e-12));
  for (const auto& f : fam) {
    CHECK(l2_norm(f) == doctest::Approx(1.0).epsilon(1e-10));
    const Residuals r = residuals(f, star3());
    CHECK(r.continuity_gap <= 1e-10);
    CHECK(r.kirchhoff_max <= 1e-8 * std::sqrt(lambda) * f.vertex_values.cwiseAbs().maxCoeff() + 1e-14);
  }
}

TEST_CASE("closed-form norm agrees with quadrature") {
  const auto r = solve_newton_trace(path12(), 4.0);
  REQUIRE(r.status == NewtonStatus::converged);
  const auto fam = eigenfunctions(path12(), r.lambda);
  const auto& f = fam[0];
  double sum = 0.0;
  for (int e = 0; e < 2; ++e) {
    const double l = path12().length(e);
    const int m = 20000;
    for (int i = 0; i < m; ++i) {
      const double x = (i + 0.5) * l / m;
      sum += std::pow(evaluate(f, e, x), 2) * l / m;
    }
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("sampled CSV") {
  const auto fam = eigenfunctions(path12(), 0.0);
  const std::string csv = sample_csv(fam[0], 4);
  CHECK(csv.rfind("edge_index,x,value\n", 0) == 0);
  int lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == 1 + 2 * 5);
  CHECK_THROWS_AS(sample_csv(fam[0], 0), Error);
}
