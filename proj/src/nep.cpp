#include "qgraph/nep.hpp"

#include <Eigen/SVD>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qgraph/error.hpp"

namespace qgraph {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxHalvings = 30;

void check_z(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) throw Error(ErrorCode::InvalidParams, "z must be positive and finite");
}

double max_abs(const SparseMatrix& m) {
  double s = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) s = std::max(s, std::abs(it.value()));
  return s;
}

double norm1(const SparseMatrix& m) {
  double best = 0.0;
  for (int k = 0; k < m.outerSize(); ++k) {
    double sum = 0.0;
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) sum += std::abs(it.value());
    best = std::max(best, sum);
  }
  return best;
}

using SparseLu = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;

bool factor_ok(const SparseLu& lu) {
  return lu.info() == Eigen::Success;
}

/// Hager-Higham estimate of |A^{-1}|_1 from factorizations of A and A^T.
template <typename Solve, typename SolveT>
double inverse_norm1_estimate(int n, Solve solve, SolveT solve_t) {
  Vector x = Vector::Constant(n, 1.0 / n);
  double estimate = 0.0;
  for (int k = 0; k < 5; ++k) {
    const Vector y = solve(x);
    const double next = y.lpNorm<1>();
    if (k > 0 && next <= estimate) break;
    estimate = next;
    Vector xi(n);
    for (int i = 0; i < n; ++i) xi(i) = y(i) >= 0.0 ? 1.0 : -1.0;
    const Vector z = solve_t(xi);
    int j = 0;
    const double zmax = z.cwiseAbs().maxCoeff(&j);
    if (k > 0 && zmax <= z.dot(x)) break;
    x.setZero();
    x(j) = 1.0;
  }
  Vector b(n);
  for (int i = 0; i < n; ++i) b(i) = (i % 2 == 0 ? 1.0 : -1.0) * (1.0 + static_cast<double>(i) / std::max(n - 1, 1));
  const Vector yb = solve(b);
  const double alt = 2.0 * yb.lpNorm<1>() / (3.0 * n);
  return std::max(estimate, alt);
}

}  // namespace

int guard_violation(const MetricGraph& graph, double z) {
  const double k = std::sqrt(z);
  for (int e = 0; e < graph.edge_count(); ++e)
    if (!(std::abs(std::sin(k * graph.length(e))) > kPoleGuard)) return e;
  return -1;
}

SparseMatrix assemble_H(const MetricGraph& graph, double z) {
  check_z(z);
  if (const int e = guard_violation(graph, z); e >= 0) throw NearSingularEdgeError(e, z);
  const int n = graph.vertex_count();
  const double k = std::sqrt(z);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(n) + 2 * graph.edge_count());
  Vector diag = Vector::Zero(n);
  for (int e = 0; e < graph.edge_count(); ++e) {
    const Edge& edge = graph.graph().edge(e);
    const double s = std::sin(k * graph.length(e));
    const double c = std::cos(k * graph.length(e));
    diag(edge.u) -= c / s;
    diag(edge.v) -= c / s;
    t.emplace_back(edge.u, edge.v, 1.0 / s);
    t.emplace_back(edge.v, edge.u, 1.0 / s);
  }
  for (int i = 0; i < n; ++i) t.emplace_back(i, i, diag(i));
  SparseMatrix h(n, n);
  h.setFromTriplets(t.begin(), t.end());
  h.makeCompressed();
  return h;
}

SparseMatrix assemble_H_prime(const MetricGraph& graph, double z) {
  check_z(z);
  if (const int e = guard_violation(graph, z); e >= 0) throw NearSingularEdgeError(e, z);
  const int n = graph.vertex_count();
  const double k = std::sqrt(z);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(n) + 2 * graph.edge_count());
  Vector diag = Vector::Zero(n);
  for (int e = 0; e < graph.edge_count(); ++e) {
    const Edge& edge = graph.graph().edge(e);
    const double l = graph.length(e);
    const double s = std::sin(k * l);
    const double c = std::cos(k * l);
    const double base = l / (2.0 * k * s * s);
    diag(edge.u) += base;
    diag(edge.v) += base;
    t.emplace_back(edge.u, edge.v, -base * c);
    t.emplace_back(edge.v, edge.u, -base * c);
  }
  for (int i = 0; i < n; ++i) t.emplace_back(i, i, diag(i));
  SparseMatrix d(n, n);
  d.setFromTriplets(t.begin(), t.end());
  d.makeCompressed();
  return d;
}

double rcond(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidParams, "rcond needs a square matrix");
  if (m.size() == 0) return 1.0;
  const double scale = m.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale)) return 0.0;
  const DenseMatrix a = m / scale;
  Eigen::BDCSVD<DenseMatrix> svd(a);
  const Vector& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smax > 0.0)) return 0.0;
  return smin / smax;
}

double rcond(const SparseMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidParams, "rcond needs a square matrix");
  const int n = static_cast<int>(m.rows());
  if (n <= kDenseNepLimit) return rcond(DenseMatrix(m));
  const double scale = max_abs(m);
  if (!(scale > 0.0) || !std::isfinite(scale)) return 0.0;
  SparseMatrix a = m / scale;
  a.makeCompressed();
  SparseLu lu;
  lu.compute(a);
  if (!factor_ok(lu)) return 0.0;
  const bool symmetric = (a - SparseMatrix(a.transpose())).norm() == 0.0;
  SparseLu lu_t;
  if (!symmetric) {
    SparseMatrix at = a.transpose();
    lu_t.compute(at);
    if (!factor_ok(lu_t)) return 0.0;
  }
  auto solve = [&](const Vector& b) -> Vector { return lu.solve(b); };
  auto solve_t = [&](const Vector& b) -> Vector { return symmetric ? Vector(lu.solve(b)) : Vector(lu_t.solve(b)); };
  const double inv = inverse_norm1_estimate(n, solve, solve_t);
  if (!std::isfinite(inv) || !(inv > 0.0)) return 0.0;
  return 1.0 / (norm1(a) * inv);
}

namespace {

/// trace(H^{-1} H') by one factorization and n solves.
double trace_term(const SparseMatrix& h, const SparseMatrix& hp) {
  const int n = static_cast<int>(h.rows());
  double trace = 0.0;
  if (n <= kDenseNepLimit) {
    const DenseMatrix hd(h);
    Eigen::PartialPivLU<DenseMatrix> lu(hd);
    if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() == 0.0)
      throw Error(ErrorCode::SingularIterate, "H(z) is singular");
    trace = lu.solve(DenseMatrix(hp)).trace();
  } else {
    SparseLu lu;
    lu.compute(h);
    if (!factor_ok(lu)) throw Error(ErrorCode::SingularIterate, "H(z) is singular");
    Vector col(n);
    for (int j = 0; j < n; ++j) {
      col = hp.col(j);
      trace += lu.solve(col)(j);
    }
  }
  if (!std::isfinite(trace)) throw Error(ErrorCode::SingularIterate, "H(z) is singular");
  return trace;
}

bool crosses_pole(const MetricGraph& graph, double a, double b) {
  const double ka = std::sqrt(a);
  const double kb = std::sqrt(b);
  for (int e = 0; e < graph.edge_count(); ++e) {
    const double l = graph.length(e) / std::numbers::pi;
    if (std::floor(ka * l) != std::floor(kb * l)) return true;
  }
  return false;
}

}  // namespace

double newton_trace_step(const MetricGraph& graph, double z) {
  const SparseMatrix h = assemble_H(graph, z);
  const SparseMatrix hp = assemble_H_prime(graph, z);
  const double t = trace_term(h, hp);
  if (t == 0.0) throw Error(ErrorCode::SingularIterate, "trace term vanished");
  return z - 1.0 / t;
}

std::string_view to_string(NewtonStatus status) noexcept {
  switch (status) {
    case NewtonStatus::converged: return "converged";
    case NewtonStatus::max_iterations: return "max_iterations";
    case NewtonStatus::singularity_encountered: return "singularity_encountered";
  }
  return "unknown";
}

NewtonResult solve_newton_trace(const MetricGraph& graph, double z_init, double rcond_tol, int maxit) {
  check_z(z_init);
  if (maxit < 0) throw Error(ErrorCode::InvalidParams, "maxit must be non-negative");
  NewtonResult result{z_init, 0, {z_init}, 0.0, NewtonStatus::max_iterations};
  if (guard_violation(graph, z_init) >= 0) {
    result.status = NewtonStatus::singularity_encountered;
    return result;
  }
  const int n = graph.vertex_count();
  double z = z_init;
  for (int it = 0;; ++it) {
    const SparseMatrix h = assemble_H(graph, z);
    const double rc = rcond(h);
    result.lambda = z;
    result.iterations = it;
    result.final_rcond = rc;
    if (rc < rcond_tol) {
      result.status = NewtonStatus::converged;
      return result;
    }
    if (it >= maxit) return result;

    const SparseMatrix hp = assemble_H_prime(graph, z);
    double t = 0.0;
    try {
      t = trace_term(h, hp);
    } catch (const Error&) {
      result.status = NewtonStatus::singularity_encountered;
      return result;
    }
    const double inverse_norm = 1.0 / (rc * norm1(h));
    const double floor = 64.0 * kEps * n * norm1(hp) * inverse_norm;
    bool moved = false;
    if (std::abs(t) > floor) {
      const double step = -1.0 / t;
      double alpha = 1.0;
      for (int halving = 0; halving <= kMaxHalvings; ++halving, alpha *= 0.5) {
        const double candidate = z + alpha * step;
        if (!(candidate > 0.0) || !std::isfinite(candidate)) continue;
        if (guard_violation(graph, candidate) >= 0) continue;
        if (crosses_pole(graph, z, candidate)) continue;
        moved = candidate != z;
        z = candidate;
        break;
      }
    }
    if (!moved) {
      result.iterations = maxit;
      return result;
    }
    result.trace_history.push_back(z);
  }
}

NullSpace null_space(const MetricGraph& graph, double lambda, double rcond_tol) {
  const SparseMatrix h = assemble_H(graph, lambda);
  const double rc = rcond(h);
  if (rc >= rcond_tol)
    throw Error(ErrorCode::NotSingular, "H(" + std::to_string(lambda) + ") has rcond " + std::to_string(rc));
  const int n = static_cast<int>(h.rows());
  const DenseMatrix hd(h);
  Eigen::BDCSVD<DenseMatrix> svd(hd, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double smax = sv(0);
  const double threshold = std::max(n * kEps * smax * 1e3, 10.0 * rcond_tol * smax);
  int dim = 0;
  for (int i = n - 1; i >= 0 && sv(i) <= threshold; --i) ++dim;
  dim = std::max(dim, 1);
  return {svd.matrixV().rightCols(dim).rowwise().reverse().eval(), sv, rc};
}

DenseMatrix nullvector(const MetricGraph& graph, double lambda, double rcond_tol) {
  return null_space(graph, lambda, rcond_tol).basis;
}

}  // namespace qgraph
