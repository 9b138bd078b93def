#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <span>
#include <variant>
#include <vector>

#include "qgraph/graph.hpp"

namespace qgraph {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Matrices of order above this are stored sparse.
inline constexpr int kDenseOrderLimit = 500;

enum class Storage { automatic, dense, sparse };

/// Real symmetric matrix held either dense or sparse.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(DenseMatrix m);
  explicit SymmetricMatrix(SparseMatrix m);

  [[nodiscard]] int order() const noexcept;
  [[nodiscard]] bool is_sparse() const noexcept { return std::holds_alternative<SparseMatrix>(storage_); }
  [[nodiscard]] const DenseMatrix* dense() const noexcept { return std::get_if<DenseMatrix>(&storage_); }
  [[nodiscard]] const SparseMatrix* sparse() const noexcept { return std::get_if<SparseMatrix>(&storage_); }

  [[nodiscard]] Vector multiply(const Vector& x) const;
  [[nodiscard]] DenseMatrix multiply(const DenseMatrix& x) const;
  [[nodiscard]] DenseMatrix to_dense() const;
  [[nodiscard]] SparseMatrix to_sparse() const;
  /// Maximum absolute column sum.
  [[nodiscard]] double norm1() const;

 private:
  std::variant<DenseMatrix, SparseMatrix> storage_;
};

/// D^{-1/2} (D - A) D^{-1/2}: unit diagonal, -1/sqrt(deg_i deg_j) on edges.
SymmetricMatrix normalized_laplacian(const CombinatorialGraph& graph, Storage storage = Storage::automatic);

/// The harmonic Laplacian D^{-1} L through its similarity with the
/// normalized one: if N x = mu x then (D^{-1} L) (D^{-1/2} x) = mu (D^{-1/2} x).
struct HarmonicLaplacian {
  SymmetricMatrix normalized;
  Vector sqrt_degree;

  /// Maps normalized-Laplacian eigenvectors (columns) to harmonic ones.
  [[nodiscard]] DenseMatrix to_harmonic(const DenseMatrix& vectors) const;
  [[nodiscard]] DenseMatrix from_harmonic(const DenseMatrix& vectors) const;
};

HarmonicLaplacian harmonic_laplacian(const CombinatorialGraph& graph, Storage storage = Storage::automatic);

/// Ascending eigenvalues with orthonormal eigenvectors in matching columns.
struct EigenPairs {
  Vector values;
  DenseMatrix vectors;

  [[nodiscard]] int size() const noexcept { return static_cast<int>(values.size()); }
};

/// Q smallest eigenpairs by LAPACK dsyevr. Throws Error{ConvergenceFailure}.
EigenPairs eigs_dense(const SymmetricMatrix& m, int count);

struct ShiftInvertOptions {
  double shift = 0.0;
  double tol = 1e-10;
  int max_iterations = 1000;
  /// 0 selects max(2Q, Q + 10).
  int block_size = 0;
  /// Return the current Ritz pairs at max_iterations instead of throwing.
  bool allow_unconverged = false;
  /// Orthonormal columns excluded from the search space.
  DenseMatrix deflate;
  /// Optional starting block (columns); padded deterministically.
  DenseMatrix start;
};

/// Q eigenpairs nearest the shift by subspace iteration on (M - shift)^{-1}
/// with Rayleigh-Ritz projection. Converged when every residual satisfies
/// |Mx - mu x| <= max(tol |mu - shift|, 100 eps |M|_1); at max_iterations
/// the weaker bound tol |M|_1 is accepted. Throws Error{ConvergenceFailure}.
EigenPairs eigs_shift_invert(const SymmetricMatrix& m, int count, const ShiftInvertOptions& options);

/// Q smallest eigenpairs of the normalized Laplacian (dense up to
/// kDenseOrderLimit, shift-invert subspace iteration above). The first pair
/// is the exact ground state mu = 0, x = D^{1/2} 1 / |D^{1/2} 1|.
EigenPairs laplacian_eigenpairs(const CombinatorialGraph& graph, int count);

/// x^T N x / x^T x evaluated as a sum of squared edge differences of
/// D^{-1/2} x, which keeps relative accuracy for tiny eigenvalues.
double laplacian_rayleigh_quotient(const CombinatorialGraph& graph, const Vector& x);

/// Number of eigenvalues strictly below `threshold` (Sylvester inertia of
/// an LDL^T factorization for sparse storage, eigenvalues for dense).
int count_eigenvalues_below(const SymmetricMatrix& m, double threshold);

struct InverseIterationOptions {
  double tol = 1e-10;
  int max_iterations = 1000;
  /// After this many fixed-shift steps without convergence, the shift is
  /// replaced by the current Rayleigh quotient once. 0 disables.
  int rayleigh_update_after = 100;
};

struct EigenPair {
  double value;
  Vector vector;
  int iterations;
  double residual;
};

/// Eigenpair of M nearest `shift` in the orthogonal complement of the
/// columns of `deflate`. The shifted matrix is factorized once; a pivot
/// below 1e-14 |M| perturbs the shift by 1e-10 and retries once.
/// Throws Error{MaxIterations, SingularShift}.
EigenPair inverse_iteration(const SymmetricMatrix& m, double shift, const Vector& start,
                            const InverseIterationOptions& options = {}, const DenseMatrix& deflate = {});

/// One level of a refinement hierarchy; consecutive levels halve h.
struct RefinementLevel {
  const ExtendedGraph* graph;
  double step;
};

struct NestedLevelResult {
  EigenPairs pairs;
  /// Inverse-iteration count per eigenvalue index (empty on the first level).
  std::vector<int> iterations;
  /// Inertia count confirmed the pairs are the Q smallest.
  bool verified = false;
  /// Recomputed directly because verification failed.
  bool fallback_used = false;
};

/// Nested eigensolver over a refinement sequence. Level 0 is solved
/// directly; on each finer level, eigenvalue q uses inverse iteration with
/// shift 1 - cos(sqrt(lambda_q) h_fine), lambda_q being the previous
/// level's quantum eigenvalue, started from the prolongated vector and
/// deflated against the pairs already accepted on that level.
std::vector<NestedLevelResult> nested_eigs(std::span<const RefinementLevel> levels, int count,
                                           const InverseIterationOptions& options = {});

/// Maps a normalized-Laplacian vector between two extensions of the same
/// original graph: original-vertex values are copied, artificial ones are
/// linearly interpolated along each edge (on D^{-1/2} x), then normalized.
Vector prolongate(const ExtendedGraph& coarse, const ExtendedGraph& fine, const Vector& x);

}  // namespace qgraph
