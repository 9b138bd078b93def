#pragma once

#include <string>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/laplacian.hpp"

namespace qgraph {

/// phi_e(x) = a_e cos(sqrt(lambda) x) + b_e sin(sqrt(lambda) x) on [0, l_e],
/// x = 0 at the lower-index endpoint. Normalized in L^2 of the graph.
struct Eigenfunction {
  double lambda;
  Vector vertex_values;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> lengths;
  std::vector<Edge> edges;
};

/// Builds the eigenfunction from vertex values Phi. lambda = 0 yields the
/// constant (total length)^{-1/2} regardless of Phi.
/// Throws Error{NonVertexLambda, NotNullvector, InvalidParams}.
Eigenfunction reconstruct(const MetricGraph& graph, double lambda, const Vector& phi);

/// Throws Error{OutOfRange}.
double evaluate(const Eigenfunction& f, EdgeId edge, double x);
/// d/dx phi_e at x.
double derivative(const Eigenfunction& f, EdgeId edge, double x);

double l2_inner(const Eigenfunction& f, const Eigenfunction& g);
double l2_norm(const Eigenfunction& f);

struct Residuals {
  double continuity_gap;
  double kirchhoff_max;
  double ode_residual;
};

/// Vertex-value mismatch, max |sum of outward derivatives| and max
/// |phi'' + lambda phi| over `samples` points per edge.
Residuals residuals(const Eigenfunction& f, const MetricGraph& graph, int samples = 16);

/// L^2-orthonormal family spanning the eigenspace whose vertex values are
/// the columns of `basis` (Gram-Schmidt in L^2).
std::vector<Eigenfunction> orthonormal_family(const MetricGraph& graph, double lambda, const DenseMatrix& basis);

/// Family for an accepted eigenvalue: null space of H(lambda), or the
/// constant for lambda = 0.
std::vector<Eigenfunction> eigenfunctions(const MetricGraph& graph, double lambda, double rcond_tol = 1e-10);

/// CSV rows edge_index,x,value with resolution + 1 points per edge.
std::string sample_csv(const Eigenfunction& f, int resolution);

}  // namespace qgraph
