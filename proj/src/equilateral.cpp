#include "qgraph/equilateral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qgraph/error.hpp"

namespace qgraph {

std::string_view to_string(ApproximationMode mode) noexcept {
  switch (mode) {
    case ApproximationMode::floor: return "floor";
    case ApproximationMode::ceil: return "ceil";
    case ApproximationMode::exact: return "exact";
  }
  return "unknown";
}

std::string_view to_string(SpectrumFlag flag) noexcept {
  switch (flag) {
    case SpectrumFlag::vertex: return "vertex";
    case SpectrumFlag::excluded_boundary: return "excluded_boundary";
  }
  return "unknown";
}

namespace {

constexpr double kIntegerSnap = 1e-9;

EquilateralApproximation approximate(const MetricGraph& graph, double h, ApproximationMode mode) {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidParams, "step h must be positive");
  std::vector<int> counts;
  counts.reserve(graph.edge_count());
  for (int e = 0; e < graph.edge_count(); ++e) {
    const double r = graph.length(e) / h;
    const double nearest = std::round(r);
    double n = 0.0;
    if (std::abs(r - nearest) <= kIntegerSnap * std::max(1.0, r))
      n = nearest;
    else
      n = mode == ApproximationMode::floor ? std::floor(r) : std::ceil(r);
    if (n < 1.0)
      throw Error(ErrorCode::StepTooLarge, "step " + std::to_string(h) + " exceeds edge " + std::to_string(e));
    if (n > 1e8) throw Error(ErrorCode::InvalidParams, "step too small for edge " + std::to_string(e));
    counts.push_back(static_cast<int>(n));
  }
  ExtendedGraph ext = extend_equilateral(graph.graph(), counts, h);
  std::vector<double> cleaned;
  cleaned.reserve(counts.size());
  for (int n : counts) cleaned.push_back(h * n);
  return {std::move(ext), h, std::move(counts), std::move(cleaned), mode};
}

}  // namespace

EquilateralApproximation floor_approximation(const MetricGraph& graph, double h) {
  return approximate(graph, h, ApproximationMode::floor);
}

EquilateralApproximation ceil_approximation(const MetricGraph& graph, double h) {
  return approximate(graph, h, ApproximationMode::ceil);
}

EquilateralApproximation exact_representation(const MetricGraph& graph, int decimal_digits) {
  GcdRepresentation rep = gcd_representation(graph, decimal_digits);
  std::vector<int> counts = rep.extended.subdivision_counts();
  std::vector<double> cleaned;
  cleaned.reserve(counts.size());
  for (int n : counts) cleaned.push_back(rep.step * n);
  return {std::move(rep.extended), rep.step, std::move(counts), std::move(cleaned), ApproximationMode::exact};
}

double distance(const MetricGraph& graph, const EquilateralApproximation& approximation) {
  const ExtendedGraph& ext = approximation.extended;
  if (ext.original_vertex_count() != graph.vertex_count() || ext.original_edge_count() != graph.edge_count() ||
      approximation.cleaned_lengths.size() != static_cast<std::size_t>(graph.edge_count()))
    throw Error(ErrorCode::TopologyMismatch, "approximation belongs to a different graph");
  for (int e = 0; e < graph.edge_count(); ++e) {
    const auto chain = ext.chain(e);
    const Edge& edge = graph.graph().edge(e);
    if (chain.front() != edge.u || chain.back() != edge.v)
      throw Error(ErrorCode::TopologyMismatch, "edge " + std::to_string(e) + " differs");
  }
  double sum = 0.0;
  for (int e = 0; e < graph.edge_count(); ++e) {
    const double d = graph.length(e) - approximation.cleaned_lengths[e];
    sum += d * d;
  }
  return std::sqrt(sum);
}

MappedEigenvalue mu_to_lambda(double mu, double ell, int k, double boundary_tol) {
  if (!(mu >= -boundary_tol && mu <= 2.0 + boundary_tol))
    throw Error(ErrorCode::MuOutOfRange, "mu = " + std::to_string(mu) + " outside [0, 2]");
  if (!(ell > 0.0) || k < 0) throw Error(ErrorCode::InvalidParams, "need ell > 0 and k >= 0");
  const double m = std::clamp(mu, 0.0, 2.0);
  // arccos(1 - mu) without cancellation near mu = 0.
  const double theta = 2.0 * std::asin(std::sqrt(m / 2.0));
  const double pi = std::numbers::pi;
  const double root = (k % 2 == 0) ? theta + k * pi : (k + 1) * pi - theta;
  const double lambda = (root / ell) * (root / ell);
  // On branch 0, tiny mu is a genuine small eigenvalue, not (j pi / ell)^2.
  const bool at_zero = m <= boundary_tol && k > 0;
  const bool at_two = m >= 2.0 - boundary_tol;
  const SpectrumFlag flag = (at_zero || at_two) && lambda > 0.0 ? SpectrumFlag::excluded_boundary : SpectrumFlag::vertex;
  return {lambda, mu, k, flag};
}

std::vector<double> MappedSpectrum::vertex_values() const {
  std::vector<double> out;
  for (const auto& e : entries)
    if (e.flag == SpectrumFlag::vertex) out.push_back(e.lambda);
  return out;
}

MappedSpectrum map_spectrum(std::span<const double> mu, double h, int count, bool complete) {
  if (count < 0) throw Error(ErrorCode::InvalidParams, "count must be non-negative");
  std::vector<MappedEigenvalue> all;
  int vertex_total = 0;
  const int max_branch = complete ? 1 << 20 : 0;
  for (int k = 0; k <= max_branch; ++k) {
    int added = 0;
    for (double m : mu) {
      MappedEigenvalue entry = mu_to_lambda(m, h, k);
      if (entry.flag == SpectrumFlag::vertex) ++added;
      all.push_back(entry);
    }
    vertex_total += added;
    if (vertex_total >= count) break;
    if (k >= 1 && added == 0) break;
  }
  std::stable_sort(all.begin(), all.end(), [](const MappedEigenvalue& a, const MappedEigenvalue& b) {
    if (a.lambda != b.lambda) return a.lambda < b.lambda;
    if (a.source_mu != b.source_mu) return a.source_mu < b.source_mu;
    return a.branch < b.branch;
  });
  MappedSpectrum out;
  int kept = 0;
  for (const auto& entry : all) {
    if (kept == count) break;
    out.entries.push_back(entry);
    if (entry.flag == SpectrumFlag::vertex) ++kept;
  }
  while (!out.entries.empty() && out.entries.back().flag != SpectrumFlag::vertex && kept == count)
    out.entries.pop_back();
  return out;
}

MappedSpectrum equilateral_spectrum(const EquilateralApproximation& approximation, int count) {
  const CombinatorialGraph& graph = approximation.extended.metric().graph();
  const int order = graph.vertex_count();
  std::vector<double> mu;
  bool complete = false;
  if (order <= kDenseOrderLimit || count >= order) {
    const EigenPairs pairs = eigs_dense(normalized_laplacian(graph, Storage::dense), order);
    mu.assign(pairs.values.data(), pairs.values.data() + order);
    mu[0] = 0.0;
    complete = true;
  } else {
    const EigenPairs pairs = laplacian_eigenpairs(graph, count);
    mu.assign(pairs.values.data(), pairs.values.data() + count);
  }
  for (double& m : mu) m = std::clamp(m, 0.0, 2.0);
  return map_spectrum(mu, approximation.h, count, complete);
}

std::vector<InitialGuess> combine_guesses(std::span<const double> floor_values,
                                          std::span<const double> ceil_values) {
  if (floor_values.size() != ceil_values.size())
    throw Error(ErrorCode::InvalidParams, "floor and ceil spectra differ in length");
  std::vector<InitialGuess> out;
  out.reserve(floor_values.size());
  for (std::size_t i = 0; i < floor_values.size(); ++i) {
    const double f = floor_values[i];
    const double c = ceil_values[i];
    out.push_back({static_cast<int>(i) + 1, 0.5 * (f + c), f, c, f < c});
  }
  return out;
}

std::vector<InitialGuess> initial_guesses(const MetricGraph& graph, double h, int count) {
  const auto fl = equilateral_spectrum(floor_approximation(graph, h), count).vertex_values();
  const auto ce = equilateral_spectrum(ceil_approximation(graph, h), count).vertex_values();
  const std::size_t n = std::min(fl.size(), ce.size());
  return combine_guesses(std::span(fl).first(n), std::span(ce).first(n));
}

std::vector<EquilateralApproximation> approximation_family(const MetricGraph& graph, ApproximationMode mode,
                                                           std::span<const double> steps) {
  if (mode == ApproximationMode::exact) throw Error(ErrorCode::InvalidParams, "family must be floor or ceil");
  std::vector<EquilateralApproximation> out;
  out.reserve(steps.size());
  for (double h : steps) out.push_back(approximate(graph, h, mode));
  return out;
}

std::vector<FamilySpectrum> family_spectra(std::span<const EquilateralApproximation> family, int count) {
  std::vector<RefinementLevel> levels;
  levels.reserve(family.size());
  for (const auto& a : family) {
    if (a.extended.metric().vertex_count() <= count)
      throw Error(ErrorCode::InvalidParams, "approximation at h = " + std::to_string(a.h) + " has too few vertices");
    levels.push_back({&a.extended, a.h});
  }
  const auto nested = nested_eigs(levels, count);
  std::vector<FamilySpectrum> out;
  out.reserve(family.size());
  for (std::size_t l = 0; l < family.size(); ++l) {
    std::vector<double> mu(nested[l].pairs.values.data(), nested[l].pairs.values.data() + count);
    for (double& m : mu) m = std::clamp(m, 0.0, 2.0);
    out.push_back({family[l].h, map_spectrum(mu, family[l].h, count, false), nested[l].fallback_used,
                   nested[l].iterations});
  }
  return out;
}

std::vector<NestedGuesses> nested_initial_guesses(const MetricGraph& graph, std::span<const double> steps,
                                                  int count) {
  const auto floors = approximation_family(graph, ApproximationMode::floor, steps);
  const auto ceils = approximation_family(graph, ApproximationMode::ceil, steps);
  const auto fs = family_spectra(floors, count);
  const auto cs = family_spectra(ceils, count);
  std::vector<NestedGuesses> out;
  out.reserve(steps.size());
  for (std::size_t l = 0; l < steps.size(); ++l) {
    const auto fv = fs[l].spectrum.vertex_values();
    const auto cv = cs[l].spectrum.vertex_values();
    const std::size_t n = std::min(fv.size(), cv.size());
    out.push_back({steps[l], combine_guesses(std::span(fv).first(n), std::span(cv).first(n)),
                   fs[l].fallback_used || cs[l].fallback_used});
  }
  return out;
}

}  // namespace qgraph
