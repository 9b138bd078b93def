#include "qgraph/spectrum_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "qgraph/error.hpp"

namespace qgraph {

using nlohmann::json;

std::string format_double(double x) {
  // nlohmann::json prints the shortest representation that round-trips.
  return json(x).dump();
}

std::string spectrum_to_json(const SpectrumResult& result) {
  json doc;
  doc["h"] = result.h;
  doc["Q"] = result.Q;
  doc["eigenvalues"] = result.eigenvalues();
  json entries = json::array();
  for (const auto& e : result.entries) {
    entries.push_back({{"lambda", e.lambda},
                       {"init", e.init},
                       {"iterations", e.iterations},
                       {"rcond", e.rcond},
                       {"status", std::string(to_string(e.status))},
                       {"multiplicity", e.multiplicity},
                       {"flags", e.flags}});
  }
  doc["entries"] = std::move(entries);
  json guesses = json::array();
  for (const auto& g : result.guesses) {
    guesses.push_back({{"q", g.q},
                       {"init", g.init},
                       {"floor", g.floor},
                       {"ceil", g.ceil},
                       {"bracket_inverted", g.bracket_inverted},
                       {"outside_bracket", g.outside_bracket},
                       {"non_vertex", g.non_vertex},
                       {"lambda", g.newton.lambda},
                       {"iterations", g.newton.iterations},
                       {"rcond", g.newton.final_rcond},
                       {"status", std::string(to_string(g.newton.status))}});
  }
  doc["guesses"] = std::move(guesses);
  json candidates = json::array();
  for (const auto& c : result.non_vertex_candidates)
    candidates.push_back({{"lambda", c.lambda}, {"k", c.k}, {"edges", c.edges}});
  doc["non_vertex_candidates"] = std::move(candidates);
  doc["missed_guesses"] = result.missed_guesses;
  return doc.dump(2) + "\n";
}

std::string spectrum_to_csv(const SpectrumResult& result) {
  std::ostringstream out;
  out << "index,lambda,init,iterations,rcond,status,multiplicity,flags\n";
  int index = 1;
  for (const auto& e : result.entries) {
    std::string flags;
    for (const auto& f : e.flags) flags += (flags.empty() ? "" : ";") + f;
    out << index << ',' << format_double(e.lambda) << ',' << format_double(e.init) << ',' << e.iterations << ','
        << format_double(e.rcond) << ',' << to_string(e.status) << ',' << e.multiplicity << ',' << flags << '\n';
    index += e.multiplicity;
  }
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

}  // namespace qgraph
