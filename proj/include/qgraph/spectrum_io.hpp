#pragma once

#include <filesystem>
#include <string>

#include "qgraph/spectrum.hpp"

namespace qgraph {

/// {"h", "Q", "eigenvalues", "entries": [{lambda, init, iterations, rcond,
/// status, multiplicity, flags}], "guesses", "non_vertex_candidates",
/// "missed_guesses"}
std::string spectrum_to_json(const SpectrumResult& result);

/// Header: index,lambda,init,iterations,rcond,status,multiplicity,flags
/// (flags joined by ';').
std::string spectrum_to_csv(const SpectrumResult& result);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace qgraph
