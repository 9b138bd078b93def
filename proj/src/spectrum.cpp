#include "qgraph/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qgraph/error.hpp"

namespace qgraph {

namespace {

constexpr double kDedupTol = 1e-8;

bool same_root(double a, double b) { return std::abs(a - b) <= kDedupTol * std::max(std::abs(a), std::abs(b)); }

int total_multiplicity(const std::vector<SpectrumEntry>& entries) {
  int s = 0;
  for (const auto& e : entries) s += e.multiplicity;
  return s;
}

SpectrumEntry ground_entry() {
  return {0.0, 0.0, 0, 0.0, NewtonStatus::converged, 1, {"ground_state"}};
}

}  // namespace

std::vector<double> SpectrumResult::eigenvalues() const {
  std::vector<double> out;
  for (const auto& e : entries)
    for (int i = 0; i < e.multiplicity && static_cast<int>(out.size()) < Q; ++i) out.push_back(e.lambda);
  return out;
}

std::vector<NonVertexCandidate> non_vertex_candidates(const MetricGraph& graph, double upper) {
  std::vector<NonVertexCandidate> out;
  if (!(upper > 0.0)) return out;
  for (int e = 0; e < graph.edge_count(); ++e) {
    const double l = graph.length(e);
    for (int k = 1;; ++k) {
      const double r = k * std::numbers::pi / l;
      const double lambda = r * r;
      if (lambda > upper) break;
      out.push_back({lambda, k, {e}});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const NonVertexCandidate& a, const NonVertexCandidate& b) { return a.lambda < b.lambda; });
  std::vector<NonVertexCandidate> merged;
  for (auto& c : out) {
    if (!merged.empty() && std::abs(merged.back().lambda - c.lambda) <= 1e-12 * c.lambda) {
      merged.back().edges.push_back(c.edges.front());
      continue;
    }
    merged.push_back(std::move(c));
  }
  for (auto& c : merged) std::sort(c.edges.begin(), c.edges.end());
  return merged;
}

SpectrumResult solve_from_guesses(const MetricGraph& graph, int count, double h,
                                  std::span<const InitialGuess> guesses, const SpectrumOptions& options) {
  if (count < 1) throw Error(ErrorCode::InvalidParams, "Q must be at least 1");
  SpectrumResult result{h, count, {ground_entry()}, {}, {}, {}};
  double upper = 0.0;
  for (const InitialGuess& g : guesses) {
    if (g.q == 1 || g.init <= 0.0) continue;
    if (!options.process_all_guesses && total_multiplicity(result.entries) >= count) break;
    upper = std::max({upper, g.init, g.floor, g.ceil});

    GuessOutcome outcome{g.q, g.init, g.floor, g.ceil, g.bracket_inverted, false, false,
                         solve_newton_trace(graph, g.init, options.rcond_tol, options.maxit)};
    const NewtonResult& nr = outcome.newton;
    outcome.non_vertex = nr.status == NewtonStatus::singularity_encountered && nr.iterations == 0;
    if (nr.status != NewtonStatus::converged) {
      if (!outcome.non_vertex) result.missed_guesses.push_back(g.q);
      result.guesses.push_back(std::move(outcome));
      continue;
    }
    const double lo = std::min(g.floor, g.ceil);
    const double hi = std::max(g.floor, g.ceil);
    outcome.outside_bracket = nr.lambda < lo * (1.0 - kDedupTol) || nr.lambda > hi * (1.0 + kDedupTol);
    upper = std::max(upper, nr.lambda);

    auto it = std::find_if(result.entries.begin(), result.entries.end(),
                           [&](const SpectrumEntry& e) { return same_root(e.lambda, nr.lambda); });
    if (it != result.entries.end()) {
      if (std::find(it->flags.begin(), it->flags.end(), "merged") == it->flags.end()) it->flags.push_back("merged");
    } else {
      const NullSpace ns = null_space(graph, nr.lambda, options.rcond_tol);
      SpectrumEntry entry{nr.lambda, g.init, nr.iterations, nr.final_rcond, nr.status,
                          static_cast<int>(ns.basis.cols()), {}};
      if (g.bracket_inverted) entry.flags.push_back("bracket_inverted");
      if (outcome.outside_bracket) entry.flags.push_back("outside_bracket");
      result.entries.push_back(std::move(entry));
    }
    result.guesses.push_back(std::move(outcome));
  }
  std::stable_sort(result.entries.begin(), result.entries.end(),
                   [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.lambda < b.lambda; });
  result.non_vertex_candidates = non_vertex_candidates(graph, upper);
  return result;
}

SpectrumResult compute_spectrum(const MetricGraph& graph, int count, double h, const SpectrumOptions& options) {
  if (count < 1) throw Error(ErrorCode::InvalidParams, "Q must be at least 1");
  const int extra = options.extra_guesses >= 0 ? options.extra_guesses : std::max(4, count / 2);
  const auto guesses = initial_guesses(graph, h, count + extra);
  return solve_from_guesses(graph, count, h, guesses, options);
}

SpectrumResult reference_spectrum(const MetricGraph& graph, int count, int decimal_digits) {
  if (count < 1) throw Error(ErrorCode::InvalidParams, "Q must be at least 1");
  const EquilateralApproximation rep = exact_representation(graph, decimal_digits);
  const auto values = equilateral_spectrum(rep, count).vertex_values();
  SpectrumResult result{rep.h, count, {}, {}, {}, {}};
  for (double v : values) {
    if (!result.entries.empty() && result.entries.back().lambda == v) {
      ++result.entries.back().multiplicity;
      continue;
    }
    if (v == 0.0) {
      result.entries.push_back(ground_entry());
    } else {
      result.entries.push_back({v, v, 0, 0.0, NewtonStatus::converged, 1, {"reference"}});
    }
  }
  if (!values.empty()) result.non_vertex_candidates = non_vertex_candidates(graph, values.back());
  return result;
}

}  // namespace qgraph
