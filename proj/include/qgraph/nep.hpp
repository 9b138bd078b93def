#pragma once

#include <string_view>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/laplacian.hpp"

namespace qgraph {

/// Evaluations of H require |sin(sqrt(z) l_e)| above this on every edge.
inline constexpr double kPoleGuard = 1e-8;
/// Orders up to this use dense factorizations and the exact 2-norm rcond.
inline constexpr int kDenseNepLimit = 200;

/// H(z): H_ii = -sum_e cot(sqrt(z) l_e) over edges at i, H_ij = 1/sin(sqrt(z) l_e).
/// Throws NearSingularEdgeError, Error{InvalidParams} for z <= 0.
SparseMatrix assemble_H(const MetricGraph& graph, double z);

/// dH/dz: diagonal sum_e l_e / (2 sqrt(z) sin^2), off-diagonal -l_e cos / (2 sqrt(z) sin^2).
SparseMatrix assemble_H_prime(const MetricGraph& graph, double z);

/// Index of the first edge violating the pole guard at z, or -1.
int guard_violation(const MetricGraph& graph, double z);

/// 1 / (|M| |M^{-1}|): exact 2-norm from the singular values for order
/// <= kDenseNepLimit, 1-norm with the Hager-Higham estimate of
/// |M^{-1}|_1 above. M is scaled by its largest entry first. 0 if singular.
double rcond(const SparseMatrix& m);
double rcond(const DenseMatrix& m);

/// z - 1 / trace(H(z)^{-1} H'(z)). Throws Error{SingularIterate}.
double newton_trace_step(const MetricGraph& graph, double z);

enum class NewtonStatus { converged, max_iterations, singularity_encountered };

[[nodiscard]] std::string_view to_string(NewtonStatus status) noexcept;

struct NewtonResult {
  double lambda;
  int iterations;
  /// z^0, z^1, ... as iterated.
  std::vector<double> trace_history;
  double final_rcond;
  NewtonStatus status;
};

/// Newton-trace iteration until rcond(H) < rcond_tol or maxit steps.
///
/// A step that leaves (0, inf), lands inside a pole guard band or crosses
/// a pole of some edge term (floor(sqrt(z) l_e / pi) changes) is halved, at
/// most 30 times. When no admissible step exists, or the trace vanishes to
/// rounding, the iterate is a fixed point and the result is max_iterations
/// with iterations = maxit. A z_init inside a guard band returns
/// singularity_encountered: it sits on a non-vertex candidate.
NewtonResult solve_newton_trace(const MetricGraph& graph, double z_init, double rcond_tol = 1e-10,
                                int maxit = 1000);

struct NullSpace {
  /// Orthonormal columns; always at least one (the smallest singular direction).
  DenseMatrix basis;
  Vector singular_values;
  double rcond;
};

/// Numerical null space of H(lambda). Singular values at or below
/// max(n eps |H| 1e3, 10 rcond_tol sigma_max) count toward it.
/// Throws Error{NotSingular} when rcond(H) >= rcond_tol.
NullSpace null_space(const MetricGraph& graph, double lambda, double rcond_tol = 1e-10);

/// Basis of null_space(graph, lambda).basis.
DenseMatrix nullvector(const MetricGraph& graph, double lambda, double rcond_tol = 1e-10);

}  // namespace qgraph
