#include "qgraph/eigenfunction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qgraph/error.hpp"
#include "qgraph/nep.hpp"
#include "qgraph/spectrum_io.hpp"

namespace qgraph {

namespace {

struct EdgeIntegrals {
  double cc;
  double ss;
  double sc;
};

EdgeIntegrals integrals(double k, double l) {
  if (k == 0.0) return {l, 0.0, 0.0};
  const double s = std::sin(k * l);
  const double s2 = std::sin(2.0 * k * l);
  return {0.5 * l + s2 / (4.0 * k), 0.5 * l - s2 / (4.0 * k), s * s / (2.0 * k)};
}

Eigenfunction constant_function(const MetricGraph& graph) {
  const double value = 1.0 / std::sqrt(graph.total_length());
  Eigenfunction f{0.0, Vector::Constant(graph.vertex_count(), value), {}, {}, graph.lengths(),
                  graph.graph().edges()};
  f.a.assign(graph.edge_count(), value);
  f.b.assign(graph.edge_count(), 0.0);
  return f;
}

/// Unnormalized reconstruction; linear in phi.
Eigenfunction raw(const MetricGraph& graph, double lambda, const Vector& phi) {
  const double k = std::sqrt(lambda);
  Eigenfunction f{lambda, phi, {}, {}, graph.lengths(), graph.graph().edges()};
  f.a.reserve(graph.edge_count());
  f.b.reserve(graph.edge_count());
  for (int e = 0; e < graph.edge_count(); ++e) {
    const Edge& edge = graph.graph().edge(e);
    const double l = graph.length(e);
    f.a.push_back(phi(edge.u));
    f.b.push_back((phi(edge.v) - phi(edge.u) * std::cos(k * l)) / std::sin(k * l));
  }
  return f;
}

void scale(Eigenfunction& f, double s) {
  f.vertex_values *= s;
  for (double& v : f.a) v *= s;
  for (double& v : f.b) v *= s;
}

void axpy(Eigenfunction& y, double alpha, const Eigenfunction& x) {
  y.vertex_values += alpha * x.vertex_values;
  for (std::size_t e = 0; e < y.a.size(); ++e) {
    y.a[e] += alpha * x.a[e];
    y.b[e] += alpha * x.b[e];
  }
}

void check_vertex_lambda(const MetricGraph& graph, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw Error(ErrorCode::InvalidParams, "lambda must be >= 0");
  if (lambda > 0.0 && guard_violation(graph, lambda) >= 0)
    throw Error(ErrorCode::NonVertexLambda, "lambda is a pole of some edge term");
}

void check_nullvector(const MetricGraph& graph, double lambda, const Vector& phi) {
  if (phi.size() != graph.vertex_count()) throw Error(ErrorCode::InvalidParams, "vertex values have wrong size");
  const double norm = phi.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw Error(ErrorCode::NotNullvector, "vertex values vanish");
  const SparseMatrix h = assemble_H(graph, lambda);
  double hnorm = 0.0;
  for (int k = 0; k < h.outerSize(); ++k) {
    double sum = 0.0;
    for (SparseMatrix::InnerIterator it(h, k); it; ++it) sum += std::abs(it.value());
    hnorm = std::max(hnorm, sum);
  }
  const double residual = (h * phi).norm();
  if (residual > 1e-8 * hnorm * norm)
    throw Error(ErrorCode::NotNullvector, "H(lambda) Phi is not small: " + std::to_string(residual));
}

}  // namespace

Eigenfunction reconstruct(const MetricGraph& graph, double lambda, const Vector& phi) {
  check_vertex_lambda(graph, lambda);
  if (lambda == 0.0) return constant_function(graph);
  check_nullvector(graph, lambda, phi);
  Eigenfunction f = raw(graph, lambda, phi);
  scale(f, 1.0 / l2_norm(f));
  return f;
}

double evaluate(const Eigenfunction& f, EdgeId edge, double x) {
  if (edge < 0 || edge >= static_cast<int>(f.a.size())) throw Error(ErrorCode::OutOfRange, "edge index out of range");
  if (!(x >= 0.0 && x <= f.lengths[edge])) throw Error(ErrorCode::OutOfRange, "x outside [0, l_e]");
  const double k = std::sqrt(f.lambda);
  return f.a[edge] * std::cos(k * x) + f.b[edge] * std::sin(k * x);
}

double derivative(const Eigenfunction& f, EdgeId edge, double x) {
  if (edge < 0 || edge >= static_cast<int>(f.a.size())) throw Error(ErrorCode::OutOfRange, "edge index out of range");
  if (!(x >= 0.0 && x <= f.lengths[edge])) throw Error(ErrorCode::OutOfRange, "x outside [0, l_e]");
  const double k = std::sqrt(f.lambda);
  return k * (-f.a[edge] * std::sin(k * x) + f.b[edge] * std::cos(k * x));
}

double l2_inner(const Eigenfunction& f, const Eigenfunction& g) {
  if (f.a.size() != g.a.size() || f.lambda != g.lambda)
    throw Error(ErrorCode::InvalidParams, "inner product needs eigenfunctions of one eigenvalue");
  const double k = std::sqrt(f.lambda);
  double sum = 0.0;
  for (std::size_t e = 0; e < f.a.size(); ++e) {
    const EdgeIntegrals in = integrals(k, f.lengths[e]);
    sum += f.a[e] * g.a[e] * in.cc + f.b[e] * g.b[e] * in.ss + (f.a[e] * g.b[e] + f.b[e] * g.a[e]) * in.sc;
  }
  return sum;
}

double l2_norm(const Eigenfunction& f) { return std::sqrt(std::max(l2_inner(f, f), 0.0)); }

Residuals residuals(const Eigenfunction& f, const MetricGraph& graph, int samples) {
  const int n = graph.vertex_count();
  Residuals r{0.0, 0.0, 0.0};
  std::vector<double> kirchhoff(n, 0.0);
  const double k = std::sqrt(f.lambda);
  for (int e = 0; e < graph.edge_count(); ++e) {
    const Edge& edge = graph.graph().edge(e);
    const double l = graph.length(e);
    r.continuity_gap = std::max(r.continuity_gap, std::abs(evaluate(f, e, 0.0) - f.vertex_values(edge.u)));
    r.continuity_gap = std::max(r.continuity_gap, std::abs(evaluate(f, e, l) - f.vertex_values(edge.v)));
    kirchhoff[edge.u] += derivative(f, e, 0.0);
    kirchhoff[edge.v] -= derivative(f, e, l);
    for (int s = 0; s <= samples; ++s) {
      const double x = l * s / std::max(samples, 1);
      const double value = evaluate(f, e, x);
      const double second = -k * k * value;
      r.ode_residual = std::max(r.ode_residual, std::abs(second + f.lambda * value));
    }
  }
  for (double v : kirchhoff) r.kirchhoff_max = std::max(r.kirchhoff_max, std::abs(v));
  return r;
}

std::vector<Eigenfunction> orthonormal_family(const MetricGraph& graph, double lambda, const DenseMatrix& basis) {
  check_vertex_lambda(graph, lambda);
  if (lambda == 0.0) return {constant_function(graph)};
  std::vector<Eigenfunction> out;
  for (int j = 0; j < basis.cols(); ++j) {
    const Vector phi = basis.col(j);
    check_nullvector(graph, lambda, phi);
    Eigenfunction f = raw(graph, lambda, phi);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : out) axpy(f, -l2_inner(f, q), q);
    const double nrm = l2_norm(f);
    if (!(nrm > 1e-10 * l2_norm(raw(graph, lambda, phi))))
      throw Error(ErrorCode::NotNullvector, "basis columns are linearly dependent");
    scale(f, 1.0 / nrm);
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Eigenfunction> eigenfunctions(const MetricGraph& graph, double lambda, double rcond_tol) {
  check_vertex_lambda(graph, lambda);
  if (lambda == 0.0) return {constant_function(graph)};
  return orthonormal_family(graph, lambda, nullvector(graph, lambda, rcond_tol));
}

std::string sample_csv(const Eigenfunction& f, int resolution) {
  if (resolution < 1) throw Error(ErrorCode::InvalidParams, "resolution must be positive");
  std::ostringstream out;
  out << "edge_index,x,value\n";
  for (std::size_t e = 0; e < f.a.size(); ++e) {
    for (int s = 0; s <= resolution; ++s) {
      const double x = s == resolution ? f.lengths[e] : f.lengths[e] * s / resolution;
      out << e << ',' << format_double(x) << ',' << format_double(evaluate(f, static_cast<int>(e), x)) << '\n';
    }
  }
  return out.str();
}

}  // namespace qgraph
