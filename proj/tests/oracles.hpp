#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's numerical routines; only graph containers are shared.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include "qgraph/graph.hpp"

namespace oracle {

inline Eigen::MatrixXd normalized_laplacian(const qgraph::CombinatorialGraph& g) {
  const int n = g.vertex_count();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    a(e.u, e.v) = 1.0;
    a(e.v, e.u) = 1.0;
  }
  Eigen::VectorXd deg = a.rowwise().sum();
  Eigen::MatrixXd l = Eigen::MatrixXd(deg.asDiagonal()) - a;
  Eigen::VectorXd s = deg.cwiseSqrt().cwiseInverse();
  return s.asDiagonal() * l * s.asDiagonal();
}

inline Eigen::VectorXd laplacian_spectrum(const qgraph::CombinatorialGraph& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normalized_laplacian(g), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline bool is_bipartite(const qgraph::CombinatorialGraph& g) {
  std::vector<int> color(g.vertex_count(), -1);
  std::queue<int> todo;
  color[0] = 0;
  todo.push(0);
  while (!todo.empty()) {
    const int v = todo.front();
    todo.pop();
    for (int e : g.incident_edges(v)) {
      const int w = g.opposite(e, v);
      if (color[w] < 0) {
        color[w] = 1 - color[v];
        todo.push(w);
      } else if (color[w] == color[v]) {
        return false;
      }
    }
  }
  return true;
}

/// Neumann eigenvalues (k pi / L)^2, k = 0 .. count-1, of an interval.
inline std::vector<double> interval_spectrum(double length, int count) {
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(std::pow(k * std::numbers::pi / length, 2));
  return out;
}

/// H(z) written out entry by entry.
inline Eigen::MatrixXd h_matrix(const qgraph::MetricGraph& g, double z) {
  const int n = g.vertex_count();
  const double k = std::sqrt(z);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto& edge = g.graph().edge(e);
    const double t = k * g.length(e);
    h(edge.u, edge.u) -= std::cos(t) / std::sin(t);
    h(edge.v, edge.v) -= std::cos(t) / std::sin(t);
    h(edge.u, edge.v) += 1.0 / std::sin(t);
    h(edge.v, edge.u) += 1.0 / std::sin(t);
  }
  return h;
}

/// Central difference of H at z with step delta.
inline Eigen::MatrixXd h_derivative_fd(const qgraph::MetricGraph& g, double z, double delta) {
  return (h_matrix(g, z + delta) - h_matrix(g, z - delta)) / (2.0 * delta);
}

/// Number of eigenvalues strictly below z (z not an eigenvalue, no pole):
/// sum_e floor(sqrt(z) l_e / pi) plus the positive inertia of H(z).
inline int count_below(const qgraph::MetricGraph& g, double z) {
  int count = 0;
  for (int e = 0; e < g.edge_count(); ++e)
    count += static_cast<int>(std::floor(std::sqrt(z) * g.length(e) / std::numbers::pi));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h_matrix(g, z), Eigen::EigenvaluesOnly);
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 0.0) ++count;
  return count;
}

inline double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace oracle
