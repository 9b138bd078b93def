#pragma once

#include <span>
#include <string>
#include <vector>

#include "qgraph/equilateral.hpp"
#include "qgraph/nep.hpp"

namespace qgraph {

/// One Newton run from an initial guess.
struct GuessOutcome {
  int q;
  double init;
  double floor;
  double ceil;
  bool bracket_inverted;
  /// Converged outside [min(floor, ceil), max(floor, ceil)].
  bool outside_bracket;
  /// The guess sits on a pole of some edge term.
  bool non_vertex;
  NewtonResult newton;
};

struct SpectrumEntry {
  double lambda;
  double init;
  int iterations;
  double rcond;
  NewtonStatus status;
  int multiplicity;
  std::vector<std::string> flags;
};

/// lambda = (k pi / l_e)^2 shared by the listed edges; not verified.
struct NonVertexCandidate {
  double lambda;
  int k;
  std::vector<EdgeId> edges;
};

struct SpectrumResult {
  double h;
  int Q;
  /// Distinct eigenvalues, ascending.
  std::vector<SpectrumEntry> entries;
  std::vector<GuessOutcome> guesses;
  std::vector<NonVertexCandidate> non_vertex_candidates;
  /// q of every guess that did not converge.
  std::vector<int> missed_guesses;

  /// Entries expanded by multiplicity, at most Q values.
  [[nodiscard]] std::vector<double> eigenvalues() const;
};

struct SpectrumOptions {
  double rcond_tol = 1e-10;
  int maxit = 1000;
  /// Guesses beyond Q (negative selects max(4, Q / 2)); non-vertex and
  /// failed guesses do not count toward Q.
  int extra_guesses = -1;
  /// Run every guess even after Q eigenvalues are found.
  bool process_all_guesses = false;
};

/// Initial guesses from floor/ceil approximations at step h, refined by
/// Newton-trace. lambda = 0 is emitted without iteration.
/// Throws Error{StepTooLarge, InvalidParams}.
SpectrumResult compute_spectrum(const MetricGraph& graph, int count, double h, const SpectrumOptions& options = {});

/// The Newton stage of compute_spectrum for precomputed guesses.
SpectrumResult solve_from_guesses(const MetricGraph& graph, int count, double h,
                                  std::span<const InitialGuess> guesses, const SpectrumOptions& options = {});

/// Reference spectrum from the exact equilateral representation on the
/// 10^-digits grid (no Newton stage). Throws Error{NotRepresentable}.
SpectrumResult reference_spectrum(const MetricGraph& graph, int count, int decimal_digits);

/// (k pi / l_e)^2 for k >= 1 up to `upper`, grouped by value.
std::vector<NonVertexCandidate> non_vertex_candidates(const MetricGraph& graph, double upper);

}  // namespace qgraph
