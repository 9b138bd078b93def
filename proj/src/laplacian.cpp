#include "qgraph/laplacian.hpp"

#include <lapacke.h>

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <string>

#include "qgraph/error.hpp"
#include "qgraph/rng.hpp"

namespace qgraph {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPivotFactor = 1e-14;
constexpr double kShiftNudge = 1e-10;
constexpr std::uint64_t kStartSeed = 0x51ab5eedULL;

}  // namespace

SymmetricMatrix::SymmetricMatrix(DenseMatrix m) : storage_(std::move(m)) {
  const auto& d = std::get<DenseMatrix>(storage_);
  if (d.rows() != d.cols()) throw Error(ErrorCode::InvalidParams, "matrix must be square");
}

SymmetricMatrix::SymmetricMatrix(SparseMatrix m) : storage_(std::move(m)) {
  auto& s = std::get<SparseMatrix>(storage_);
  if (s.rows() != s.cols()) throw Error(ErrorCode::InvalidParams, "matrix must be square");
  s.makeCompressed();
}

int SymmetricMatrix::order() const noexcept {
  return std::visit([](const auto& m) { return static_cast<int>(m.rows()); }, storage_);
}

Vector SymmetricMatrix::multiply(const Vector& x) const {
  return std::visit([&](const auto& m) -> Vector { return m * x; }, storage_);
}

DenseMatrix SymmetricMatrix::multiply(const DenseMatrix& x) const {
  return std::visit([&](const auto& m) -> DenseMatrix { return m * x; }, storage_);
}

DenseMatrix SymmetricMatrix::to_dense() const {
  if (const auto* d = dense()) return *d;
  return DenseMatrix(*sparse());
}

SparseMatrix SymmetricMatrix::to_sparse() const {
  if (const auto* s = sparse()) return *s;
  return dense()->sparseView();
}

double SymmetricMatrix::norm1() const {
  if (const auto* d = dense()) return d->size() == 0 ? 0.0 : d->cwiseAbs().colwise().sum().maxCoeff();
  const auto& s = *sparse();
  double best = 0.0;
  for (int k = 0; k < s.outerSize(); ++k) {
    double sum = 0.0;
    for (SparseMatrix::InnerIterator it(s, k); it; ++it) sum += std::abs(it.value());
    best = std::max(best, sum);
  }
  return best;
}

SymmetricMatrix normalized_laplacian(const CombinatorialGraph& graph, Storage storage) {
  const int n = graph.vertex_count();
  Vector inv_sqrt(n);
  for (int v = 0; v < n; ++v) inv_sqrt(v) = 1.0 / std::sqrt(static_cast<double>(graph.degree(v)));
  const bool want_sparse =
      storage == Storage::sparse || (storage == Storage::automatic && n > kDenseOrderLimit);
  if (!want_sparse) {
    DenseMatrix m = DenseMatrix::Identity(n, n);
    for (const Edge& e : graph.edges()) {
      const double w = -inv_sqrt(e.u) * inv_sqrt(e.v);
      m(e.u, e.v) = w;
      m(e.v, e.u) = w;
    }
    return SymmetricMatrix(std::move(m));
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n) + 2 * graph.edge_count());
  for (int v = 0; v < n; ++v) triplets.emplace_back(v, v, 1.0);
  for (const Edge& e : graph.edges()) {
    const double w = -inv_sqrt(e.u) * inv_sqrt(e.v);
    triplets.emplace_back(e.u, e.v, w);
    triplets.emplace_back(e.v, e.u, w);
  }
  SparseMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return SymmetricMatrix(std::move(m));
}

DenseMatrix HarmonicLaplacian::to_harmonic(const DenseMatrix& vectors) const {
  return sqrt_degree.cwiseInverse().asDiagonal() * vectors;
}

DenseMatrix HarmonicLaplacian::from_harmonic(const DenseMatrix& vectors) const {
  return sqrt_degree.asDiagonal() * vectors;
}

HarmonicLaplacian harmonic_laplacian(const CombinatorialGraph& graph, Storage storage) {
  Vector sd(graph.vertex_count());
  for (int v = 0; v < graph.vertex_count(); ++v) sd(v) = std::sqrt(static_cast<double>(graph.degree(v)));
  return {normalized_laplacian(graph, storage), std::move(sd)};
}

EigenPairs eigs_dense(const SymmetricMatrix& m, int count) {
  const int n = m.order();
  if (count < 0 || count > n) throw Error(ErrorCode::InvalidParams, "eigenpair count out of range");
  EigenPairs out;
  if (count == 0) {
    out.values.resize(0);
    out.vectors.resize(n, 0);
    return out;
  }
  DenseMatrix a = m.to_dense();
  Vector w(n);
  DenseMatrix z(n, count);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0, 1, count,
                                         0.0, &found, w.data(), z.data(), n, support.data());
  if (info != 0 || found != count)
    throw Error(ErrorCode::ConvergenceFailure, "dsyevr failed, info = " + std::to_string(info));
  out.values = w.head(count);
  out.vectors = std::move(z);
  return out;
}

namespace {

/// Factorization of M - shift I with the near-singular pivot policy.
class ShiftedSolver {
 public:
  ShiftedSolver(const SymmetricMatrix& m, double shift) {
    const double threshold = kPivotFactor * std::max(m.norm1(), 1.0);
    if (!factor(m, shift, threshold)) {
      if (!factor(m, shift + kShiftNudge, threshold))
        throw Error(ErrorCode::SingularShift, "shifted matrix is singular at shift " + std::to_string(shift));
    }
  }

  [[nodiscard]] double shift() const noexcept { return shift_; }

  template <typename Rhs>
  [[nodiscard]] DenseMatrix solve(const Rhs& b) const {
    if (sparse_) return sparse_->solve(DenseMatrix(b));
    return dense_->solve(DenseMatrix(b));
  }

 private:
  bool factor(const SymmetricMatrix& m, double shift, double threshold) {
    shift_ = shift;
    if (const auto* s = m.sparse()) {
      SparseMatrix identity(s->rows(), s->cols());
      identity.setIdentity();
      SparseMatrix a = *s - shift * identity;
      auto ldlt = std::make_unique<Eigen::SimplicialLDLT<SparseMatrix>>(a);
      if (ldlt->info() != Eigen::Success) return false;
      if (ldlt->vectorD().size() > 0 && ldlt->vectorD().cwiseAbs().minCoeff() < threshold) return false;
      sparse_ = std::move(ldlt);
      return true;
    }
    const DenseMatrix& d = *m.dense();
    DenseMatrix a = d - shift * DenseMatrix::Identity(d.rows(), d.cols());
    auto lu = std::make_unique<Eigen::PartialPivLU<DenseMatrix>>(a);
    if (lu->matrixLU().rows() > 0 && lu->matrixLU().diagonal().cwiseAbs().minCoeff() < threshold) return false;
    dense_ = std::move(lu);
    return true;
  }

  double shift_ = 0.0;
  std::unique_ptr<Eigen::SimplicialLDLT<SparseMatrix>> sparse_;
  std::unique_ptr<Eigen::PartialPivLU<DenseMatrix>> dense_;
};

void project_out(DenseMatrix& x, const DenseMatrix& basis) {
  if (basis.cols() == 0) return;
  for (int pass = 0; pass < 2; ++pass) x -= basis * (basis.transpose() * x);
}

void project_out(Vector& x, const DenseMatrix& basis) {
  if (basis.cols() == 0) return;
  for (int pass = 0; pass < 2; ++pass) x -= basis * (basis.transpose() * x);
}

DenseMatrix orthonormalize(const DenseMatrix& x) {
  Eigen::HouseholderQR<DenseMatrix> qr(x);
  return qr.householderQ() * DenseMatrix::Identity(x.rows(), x.cols());
}

DenseMatrix random_block(int rows, int cols, Rng& rng) {
  DenseMatrix x(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) x(i, j) = rng.uniform01() - 0.5;
  return x;
}

}  // namespace

EigenPairs eigs_shift_invert(const SymmetricMatrix& m, int count, const ShiftInvertOptions& options) {
  const int n = m.order();
  const int available = n - static_cast<int>(options.deflate.cols());
  if (count < 0 || count > available) throw Error(ErrorCode::InvalidParams, "eigenpair count out of range");
  EigenPairs out;
  if (count == 0) {
    out.values.resize(0);
    out.vectors.resize(n, 0);
    return out;
  }
  if (options.max_iterations < 1) throw Error(ErrorCode::InvalidParams, "max_iterations must be positive");
  int p = options.block_size > 0 ? options.block_size : std::max(2 * count, count + 10);
  p = std::clamp(p, count, available);

  Rng rng(kStartSeed);
  DenseMatrix x = random_block(n, p, rng);
  const int given = std::min<int>(static_cast<int>(options.start.cols()), p);
  if (given > 0 && options.start.rows() == n) x.leftCols(given) = options.start.leftCols(given);
  project_out(x, options.deflate);
  x = orthonormalize(x);

  const ShiftedSolver solver(m, options.shift);
  const double sigma = solver.shift();
  const double norm = m.norm1();
  const double floor_tol = 100.0 * kEps * std::max(norm, 1.0);

  Vector theta;
  DenseMatrix ritz;
  Vector residual(count);
  for (int it = 1; it <= options.max_iterations; ++it) {
    DenseMatrix y = solver.solve(x);
    project_out(y, options.deflate);
    x = orthonormalize(y);

    DenseMatrix mx = m.multiply(x);
    DenseMatrix g = x.transpose() * mx;
    g = 0.5 * (g + g.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<DenseMatrix> small(g);
    std::vector<int> order(p);
    std::iota(order.begin(), order.end(), 0);
    const Vector& ev = small.eigenvalues();
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::abs(ev(a) - sigma) < std::abs(ev(b) - sigma); });
    DenseMatrix s(p, p);
    theta.resize(p);
    for (int j = 0; j < p; ++j) {
      s.col(j) = small.eigenvectors().col(order[j]);
      theta(j) = ev(order[j]);
    }
    x = x * s;
    mx = mx * s;

    bool converged = true;
    bool acceptable = true;
    for (int j = 0; j < count; ++j) {
      residual(j) = (mx.col(j) - theta(j) * x.col(j)).norm();
      converged = converged && residual(j) <= std::max(options.tol * std::abs(theta(j) - sigma), floor_tol);
      acceptable = acceptable && residual(j) <= options.tol * std::max(norm, 1.0);
    }
    if (converged || (it == options.max_iterations && (acceptable || options.allow_unconverged))) {
      ritz = x.leftCols(count);
      break;
    }
    if (it == options.max_iterations)
      throw Error(ErrorCode::ConvergenceFailure,
                  "subspace iteration did not converge, max residual " + std::to_string(residual.maxCoeff()));
  }
  std::vector<int> idx(count);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return theta(a) < theta(b); });
  out.values.resize(count);
  out.vectors.resize(n, count);
  for (int j = 0; j < count; ++j) {
    out.values(j) = theta(idx[j]);
    out.vectors.col(j) = ritz.col(idx[j]);
  }
  return out;
}

double laplacian_rayleigh_quotient(const CombinatorialGraph& graph, const Vector& x) {
  double num = 0.0;
  for (const Edge& e : graph.edges()) {
    const double d = x(e.u) / std::sqrt(static_cast<double>(graph.degree(e.u))) -
                     x(e.v) / std::sqrt(static_cast<double>(graph.degree(e.v)));
    num += d * d;
  }
  return num / x.squaredNorm();
}

namespace {

Vector ground_state(const CombinatorialGraph& graph) {
  Vector g(graph.vertex_count());
  for (int v = 0; v < graph.vertex_count(); ++v) g(v) = std::sqrt(static_cast<double>(graph.degree(v)));
  return g / g.norm();
}

void refine_values(const CombinatorialGraph& graph, EigenPairs& pairs) {
  if (pairs.size() == 0) return;
  pairs.values(0) = 0.0;
  for (int j = 1; j < pairs.size(); ++j) pairs.values(j) = laplacian_rayleigh_quotient(graph, pairs.vectors.col(j));
}

}  // namespace

EigenPairs laplacian_eigenpairs(const CombinatorialGraph& graph, int count) {
  const int n = graph.vertex_count();
  if (count < 0 || count > n) throw Error(ErrorCode::InvalidParams, "eigenpair count out of range");
  const SymmetricMatrix m = normalized_laplacian(graph);
  EigenPairs out;
  if (!m.is_sparse()) {
    out = eigs_dense(m, count);
    if (count > 0) out.vectors.col(0) = ground_state(graph);
    refine_values(graph, out);
    return out;
  }

  const Vector ground = ground_state(graph);
  out.values.resize(count);
  out.vectors.resize(n, count);
  if (count == 0) return out;
  out.values(0) = 0.0;
  out.vectors.col(0) = ground;
  if (count == 1) return out;

  // Chung-type lower bound for mu_2 keeps the first shift below the spectrum;
  // a few iterations then estimate mu_2 and the shift moves to -mu_2 / 2.
  double volume = 0.0;
  for (int v = 0; v < n; ++v) volume += graph.degree(v);
  const double tau = 1.0 / (4.0 * n * volume);

  ShiftInvertOptions probe;
  probe.shift = -tau;
  probe.max_iterations = 4;
  probe.allow_unconverged = true;
  probe.deflate = ground;
  const EigenPairs rough = eigs_shift_invert(m, count - 1, probe);

  ShiftInvertOptions opts;
  opts.shift = -std::max(0.5 * rough.values(0), tau);
  opts.deflate = ground;
  opts.start = rough.vectors;
  const EigenPairs rest = eigs_shift_invert(m, count - 1, opts);
  out.values.tail(count - 1) = rest.values;
  out.vectors.rightCols(count - 1) = rest.vectors;
  refine_values(graph, out);
  return out;
}

int count_eigenvalues_below(const SymmetricMatrix& m, double threshold) {
  if (const auto* d = m.dense()) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(*d, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "eigenvalue count failed");
    return static_cast<int>((es.eigenvalues().array() < threshold).count());
  }
  const SparseMatrix& s = *m.sparse();
  SparseMatrix identity(s.rows(), s.cols());
  identity.setIdentity();
  double t = threshold;
  for (int attempt = 0; attempt < 2; ++attempt) {
    Eigen::SimplicialLDLT<SparseMatrix> ldlt(s - t * identity);
    if (ldlt.info() == Eigen::Success && (ldlt.vectorD().array() != 0.0).all())
      return static_cast<int>((ldlt.vectorD().array() < 0.0).count());
    t = threshold * (1.0 - 1e-12) - 1e-300;
  }
  throw Error(ErrorCode::SingularShift, "inertia count failed at " + std::to_string(threshold));
}

EigenPair inverse_iteration(const SymmetricMatrix& m, double shift, const Vector& start,
                            const InverseIterationOptions& options, const DenseMatrix& deflate) {
  const int n = m.order();
  if (start.size() != n) throw Error(ErrorCode::InvalidParams, "start vector has wrong size");
  if (options.max_iterations < 1) throw Error(ErrorCode::InvalidParams, "max_iterations must be positive");
  auto solver = std::make_unique<ShiftedSolver>(m, shift);

  Vector x = start;
  project_out(x, deflate);
  if (!(x.norm() > 1e-12 * std::max(start.norm(), 1e-300))) {
    Rng rng(kStartSeed);
    x = random_block(n, 1, rng).col(0);
    project_out(x, deflate);
  }
  x.normalize();

  bool shift_updated = false;
  double theta = 0.0;
  double residual = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    if (!shift_updated && options.rayleigh_update_after > 0 && it > options.rayleigh_update_after) {
      shift_updated = true;
      try {
        solver = std::make_unique<ShiftedSolver>(m, theta);
      } catch (const Error&) {
        // keep the original factorization
      }
    }
    Vector y = solver->solve(x).col(0);
    project_out(y, deflate);
    const double ny = y.norm();
    if (!(ny > 0.0) || !std::isfinite(ny)) throw Error(ErrorCode::SingularShift, "inverse iteration broke down");
    x = y / ny;
    const Vector mx = m.multiply(x);
    theta = x.dot(mx);
    residual = (mx - theta * x).norm();
    if (residual <= options.tol) return {theta, x, it, residual};
  }
  throw Error(ErrorCode::MaxIterations,
              "inverse iteration reached the iteration cap, residual " + std::to_string(residual));
}

Vector prolongate(const ExtendedGraph& coarse, const ExtendedGraph& fine, const Vector& x) {
  if (coarse.original_vertex_count() != fine.original_vertex_count() ||
      coarse.original_edge_count() != fine.original_edge_count())
    throw Error(ErrorCode::TopologyMismatch, "extensions of different graphs");
  const auto& cg = coarse.metric().graph();
  const auto& fg = fine.metric().graph();
  if (x.size() != cg.vertex_count()) throw Error(ErrorCode::InvalidParams, "vector has wrong size");

  Vector f(cg.vertex_count());
  for (int v = 0; v < cg.vertex_count(); ++v) f(v) = x(v) / std::sqrt(static_cast<double>(cg.degree(v)));

  Vector values = Vector::Zero(fg.vertex_count());
  for (int v = 0; v < fine.original_vertex_count(); ++v) values(v) = f(v);
  for (int e = 0; e < fine.original_edge_count(); ++e) {
    const auto cchain = coarse.chain(e);
    const auto fchain = fine.chain(e);
    const int nc = static_cast<int>(cchain.size()) - 1;
    const int nf = static_cast<int>(fchain.size()) - 1;
    for (int j = 1; j < nf; ++j) {
      const double s = static_cast<double>(j) * nc / nf;
      const int k = std::clamp(static_cast<int>(std::floor(s)), 0, nc - 1);
      const double w = s - k;
      values(fchain[j]) = (1.0 - w) * f(cchain[k]) + w * f(cchain[k + 1]);
    }
  }
  for (int v = 0; v < fg.vertex_count(); ++v) values(v) *= std::sqrt(static_cast<double>(fg.degree(v)));
  const double nrm = values.norm();
  if (nrm > 0.0) values /= nrm;
  return values;
}

namespace {

bool verify_smallest(const SymmetricMatrix& m, const Vector& values, int count) {
  if (count == 0) return true;
  const double top = values(count - 1);
  const double slack = 1e-7 * std::abs(top) + 1e-14;
  const double below = top - slack;
  const int found_below = static_cast<int>((values.array() < below).count());
  return count_eigenvalues_below(m, below) == found_below && count_eigenvalues_below(m, top + slack) >= count;
}

}  // namespace

std::vector<NestedLevelResult> nested_eigs(std::span<const RefinementLevel> levels, int count,
                                           const InverseIterationOptions& options) {
  std::vector<NestedLevelResult> out;
  out.reserve(levels.size());
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const ExtendedGraph& ext = *levels[l].graph;
    const CombinatorialGraph& graph = ext.metric().graph();
    if (count > graph.vertex_count()) throw Error(ErrorCode::InvalidParams, "eigenpair count exceeds order");
    NestedLevelResult level;
    if (l == 0) {
      level.pairs = laplacian_eigenpairs(graph, count);
      level.verified = true;
      out.push_back(std::move(level));
      continue;
    }
    const NestedLevelResult& prev = out.back();
    const double ratio = levels[l].step / levels[l - 1].step;
    const SymmetricMatrix m = normalized_laplacian(graph);
    const int n = graph.vertex_count();

    EigenPairs pairs;
    pairs.values.resize(count);
    pairs.vectors.resize(n, count);
    bool failed = false;
    if (count > 0) {
      pairs.values(0) = 0.0;
      pairs.vectors.col(0) = ground_state(graph);
      level.iterations.push_back(0);
    }
    for (int q = 1; q < count && !failed; ++q) {
      const double mu = std::clamp(prev.pairs.values(q), 0.0, 2.0);
      const double theta = 2.0 * std::asin(std::sqrt(mu / 2.0));
      const double half = std::sin(0.5 * theta * ratio);
      const double shift = 2.0 * half * half;
      const Vector start = prolongate(*levels[l - 1].graph, ext, prev.pairs.vectors.col(q));
      try {
        const EigenPair pair = inverse_iteration(m, shift, start, options, pairs.vectors.leftCols(q));
        pairs.values(q) = laplacian_rayleigh_quotient(graph, pair.vector);
        pairs.vectors.col(q) = pair.vector;
        level.iterations.push_back(pair.iterations);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::MaxIterations && e.code() != ErrorCode::SingularShift) throw;
        failed = true;
      }
    }
    if (!failed) {
      std::vector<int> idx(count);
      std::iota(idx.begin(), idx.end(), 0);
      std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return pairs.values(a) < pairs.values(b); });
      EigenPairs sorted;
      sorted.values.resize(count);
      sorted.vectors.resize(n, count);
      for (int j = 0; j < count; ++j) {
        sorted.values(j) = pairs.values(idx[j]);
        sorted.vectors.col(j) = pairs.vectors.col(idx[j]);
      }
      pairs = std::move(sorted);
      level.verified = verify_smallest(m, pairs.values, count);
    }
    if (failed || !level.verified) {
      level.pairs = laplacian_eigenpairs(graph, count);
      level.fallback_used = true;
      level.verified = true;
    } else {
      level.pairs = std::move(pairs);
    }
    out.push_back(std::move(level));
  }
  return out;
}

}  // namespace qgraph
