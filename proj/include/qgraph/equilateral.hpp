#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/laplacian.hpp"

namespace qgraph {

enum class ApproximationMode { floor, ceil, exact };

[[nodiscard]] std::string_view to_string(ApproximationMode mode) noexcept;

/// Equilateral extended graph with common sub-edge length h whose cleaned
/// lengths h * N_e approximate the original lengths.
struct EquilateralApproximation {
  ExtendedGraph extended;
  double h;
  std::vector<int> N;
  std::vector<double> cleaned_lengths;
  ApproximationMode mode;
};

/// N_e = floor(l_e / h). Quotients within 1e-9 (relative) of an integer are
/// rounded to it, so on-grid lengths give floor = ceil.
/// Throws Error{StepTooLarge, InvalidParams}.
EquilateralApproximation floor_approximation(const MetricGraph& graph, double h);
/// N_e = ceil(l_e / h). Throws Error{InvalidParams}.
EquilateralApproximation ceil_approximation(const MetricGraph& graph, double h);
/// Exact representation on the 10^-digits grid (h = gcd of lengths).
EquilateralApproximation exact_representation(const MetricGraph& graph, int decimal_digits);

/// |l - l_h|_2. Throws Error{TopologyMismatch}.
double distance(const MetricGraph& graph, const EquilateralApproximation& approximation);

enum class SpectrumFlag { vertex, excluded_boundary };

[[nodiscard]] std::string_view to_string(SpectrumFlag flag) noexcept;

struct MappedEigenvalue {
  double lambda;
  double source_mu;
  int branch;
  SpectrumFlag flag;
};

/// Quantum eigenvalue on a branch k >= 0 for an equilateral graph of edge
/// length ell whose harmonic Laplacian has eigenvalue mu:
///   even k: sqrt(lambda) ell = arccos(1 - mu) + k pi
///   odd k:  sqrt(lambda) ell = (k + 1) pi - arccos(1 - mu)
/// mu within `boundary_tol` of 0 or 2 with lambda > 0 is excluded_boundary.
/// Throws Error{MuOutOfRange, InvalidParams}.
MappedEigenvalue mu_to_lambda(double mu, double ell, int k, double boundary_tol = 1e-9);

struct MappedSpectrum {
  /// Sorted ascending by (lambda, source_mu, branch). Holds the first Q
  /// vertex eigenvalues together with excluded values below the last one.
  std::vector<MappedEigenvalue> entries;

  /// The vertex-flagged lambdas in order.
  [[nodiscard]] std::vector<double> vertex_values() const;
};

/// Maps a set of normalized-Laplacian eigenvalues over branches k = 0, 1, ...
/// until Q vertex eigenvalues below the branch cutoff ((k+1) pi / h)^2 are
/// known. When `complete` is false only branch 0 is used and `mu` must hold
/// at least Q values below 2 (the Q smallest of the spectrum).
MappedSpectrum map_spectrum(std::span<const double> mu, double h, int count, bool complete);

/// Q smallest vertex eigenvalues of an equilateral approximation (lambda = 0
/// included).
MappedSpectrum equilateral_spectrum(const EquilateralApproximation& approximation, int count);

struct InitialGuess {
  int q;
  double init;
  double floor;
  double ceil;
  /// lambda_q(floor) < lambda_q(ceil): the bracket is inverted.
  bool bracket_inverted;
};

/// lambda_q^init = (lambda_q(floor) + lambda_q(ceil)) / 2 with indices
/// paired by sorted position. Throws Error{InvalidParams} on size mismatch.
std::vector<InitialGuess> combine_guesses(std::span<const double> floor_values,
                                          std::span<const double> ceil_values);

/// Floor/ceil guesses at step h. Throws Error{StepTooLarge}.
std::vector<InitialGuess> initial_guesses(const MetricGraph& graph, double h, int count);

/// Floor or ceil approximations over a sequence of steps.
std::vector<EquilateralApproximation> approximation_family(const MetricGraph& graph, ApproximationMode mode,
                                                           std::span<const double> steps);

struct FamilySpectrum {
  double h;
  MappedSpectrum spectrum;
  bool fallback_used;
  std::vector<int> inverse_iterations;
};

/// Q smallest vertex eigenvalues of every member of a refinement family,
/// obtained with the nested eigensolver (each h half the previous one).
std::vector<FamilySpectrum> family_spectra(std::span<const EquilateralApproximation> family, int count);

/// Initial guesses for every step of a halving sequence, with floor and
/// ceil spectra computed by nested iteration.
struct NestedGuesses {
  double h;
  std::vector<InitialGuess> guesses;
  bool fallback_used;
};
std::vector<NestedGuesses> nested_initial_guesses(const MetricGraph& graph, std::span<const double> steps,
                                                  int count);

}  // namespace qgraph
