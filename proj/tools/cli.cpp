#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "qgraph/eigenfunction.hpp"
#include "qgraph/equilateral.hpp"
#include "qgraph/error.hpp"
#include "qgraph/generators.hpp"
#include "qgraph/graph_io.hpp"
#include "qgraph/spectrum.hpp"
#include "qgraph/spectrum_io.hpp"

namespace qgraph::cli {

namespace {

using nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename T>
std::pair<T, T> parse_range(const std::string& text, const char* what) {
  const auto pos = text.find("..");
  if (pos == std::string::npos) throw ConfigError(std::string(what) + " must look like a..b");
  T lo{};
  T hi{};
  std::istringstream a(text.substr(0, pos));
  std::istringstream b(text.substr(pos + 2));
  a >> lo;
  b >> hi;
  if (a.fail() || b.fail() || !a.eof() || !b.eof()) throw ConfigError(std::string("cannot parse ") + what);
  if (hi < lo) throw ConfigError(std::string(what) + " is empty");
  return {lo, hi};
}

struct Options {
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "auto";

  std::string kind;
  int n = 0;
  int k = 0;
  std::string len = "1..2";
  std::optional<int> decimals;

  std::string graph;
  int Q = 10;
  std::optional<double> h;
  std::optional<int> exact_digits;
  bool process_all = false;

  std::string J;
  std::optional<int> reference_digits;

  std::string z;
  int samples = 1000;

  double lambda = 0.0;
  int resolution = 100;
  int member = 0;
  bool refine = false;
};

std::string resolve_format(const Options& o, const char* fallback) {
  if (o.format == "auto") return fallback;
  if (o.format != "csv" && o.format != "json") throw ConfigError("--format must be csv or json");
  return o.format;
}

std::string cmd_generate(const Options& o) {
  if (o.format == "csv") throw ConfigError("graphs are written as JSON");
  Rng rng(o.seed);
  const GraphKind kind = parse_graph_kind(o.kind);
  const CombinatorialGraph g = generate(kind, {o.n, o.k}, rng);
  const auto [lo, hi] = parse_range<double>(o.len, "--len");
  auto lengths = random_lengths(g.edge_count(), {lo, hi, o.decimals}, rng);
  return graph_to_json(MetricGraph(g, std::move(lengths)));
}

std::string cmd_spectrum(const Options& o) {
  if (o.h.has_value() == o.exact_digits.has_value()) throw ConfigError("give exactly one of --h and --exact-digits");
  const MetricGraph g = read_graph(o.graph);
  SpectrumResult r{};
  if (o.h) {
    if (*o.h > g.min_length()) throw ConfigError("--h exceeds the shortest edge");
    SpectrumOptions opts;
    opts.process_all_guesses = o.process_all;
    r = compute_spectrum(g, o.Q, *o.h, opts);
  } else {
    r = reference_spectrum(g, o.Q, *o.exact_digits);
  }
  return resolve_format(o, "json") == "json" ? spectrum_to_json(r) : spectrum_to_csv(r);
}

std::string cmd_sweep(const Options& o) {
  const MetricGraph g = read_graph(o.graph);
  const auto [j0, j1] = parse_range<int>(o.J, "--J");
  std::vector<double> reference;
  if (o.reference_digits) reference = reference_spectrum(g, o.Q, *o.reference_digits).eigenvalues();

  struct Row {
    int J;
    double h;
    std::string mode;
    double dist;
    int q;
    double lambda;
    bool ok;
  };
  std::vector<Row> rows;
  for (int J = j0; J <= j1; ++J) {
    const double h = std::ldexp(1.0, -J);
    if (h > g.min_length()) throw ConfigError("h = 2^-" + std::to_string(J) + " exceeds the shortest edge");
    const auto fl = floor_approximation(g, h);
    const auto ce = ceil_approximation(g, h);
    const auto fv = equilateral_spectrum(fl, o.Q).vertex_values();
    const auto cv = equilateral_spectrum(ce, o.Q).vertex_values();
    const double dfl = distance(g, fl);
    const double dce = distance(g, ce);
    for (int q = 0; q < o.Q; ++q) {
      const double f = q < static_cast<int>(fv.size()) ? fv[q] : NAN;
      const double c = q < static_cast<int>(cv.size()) ? cv[q] : NAN;
      const double slack = 1e-9 * std::max(std::abs(f), std::abs(c));
      bool ok = f >= c - slack;
      if (q < static_cast<int>(reference.size())) {
        const double ref = reference[q];
        const double s = 1e-9 * std::abs(ref);
        ok = c <= ref + s && ref <= f + s;
      }
      rows.push_back({J, h, "floor", dfl, q + 1, f, ok});
      rows.push_back({J, h, "ceil", dce, q + 1, c, ok});
    }
  }

  const bool have_ref = !reference.empty();
  auto ref_of = [&](int q) { return q - 1 < static_cast<int>(reference.size()) ? reference[q - 1] : NAN; };
  if (resolve_format(o, "csv") == "json") {
    json doc = json::array();
    for (const Row& r : rows) {
      json row{{"J", r.J}, {"h", r.h}, {"mode", r.mode}, {"dist", r.dist},
               {"q", r.q}, {"lambda", r.lambda}, {"bracket_ok", r.ok}};
      if (have_ref) {
        row["reference"] = ref_of(r.q);
        row["abs_error"] = std::abs(r.lambda - ref_of(r.q));
      }
      doc.push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
  }
  std::ostringstream csv;
  csv << "J,h,mode,dist,q,lambda,reference,abs_error,bracket_ok\n";
  for (const Row& r : rows) {
    csv << r.J << ',' << format_double(r.h) << ',' << r.mode << ',' << format_double(r.dist) << ',' << r.q << ','
        << format_double(r.lambda) << ',';
    if (have_ref) csv << format_double(ref_of(r.q)) << ',' << format_double(std::abs(r.lambda - ref_of(r.q)));
    else csv << ',';
    csv << ',' << (r.ok ? "true" : "false") << '\n';
  }
  return csv.str();
}

std::string cmd_scan(const Options& o) {
  const MetricGraph g = read_graph(o.graph);
  const auto [a, b] = parse_range<double>(o.z, "--z");
  if (!(a > 0.0)) throw ConfigError("--z must be positive");
  if (o.samples < 2) throw ConfigError("--samples must be at least 2");
  std::vector<std::pair<double, double>> points;
  for (int i = 0; i < o.samples; ++i) {
    const double z = i + 1 == o.samples ? b : a + (b - a) * i / (o.samples - 1);
    if (guard_violation(g, z) >= 0) continue;
    points.emplace_back(z, rcond(assemble_H(g, z)));
  }
  if (resolve_format(o, "csv") == "json") {
    json doc = json::array();
    for (const auto& [z, rc] : points) doc.push_back({{"z", z}, {"rcond", rc}});
    return doc.dump(2) + "\n";
  }
  std::ostringstream csv;
  csv << "z,rcond\n";
  for (const auto& [z, rc] : points) csv << format_double(z) << ',' << format_double(rc) << '\n';
  return csv.str();
}

std::string cmd_eigenfunction(const Options& o) {
  const MetricGraph g = read_graph(o.graph);
  double lambda = o.lambda;
  if (o.refine && lambda > 0.0) {
    const NewtonResult nr = solve_newton_trace(g, lambda);
    if (nr.status != NewtonStatus::converged)
      throw ConfigError("Newton-trace did not converge from lambda = " + format_double(lambda));
    lambda = nr.lambda;
  }
  const auto family = eigenfunctions(g, lambda);
  if (o.member < 0 || o.member >= static_cast<int>(family.size()))
    throw ConfigError("--member must be below the multiplicity " + std::to_string(family.size()));
  const Eigenfunction& f = family[o.member];
  if (resolve_format(o, "csv") == "csv") return sample_csv(f, o.resolution);
  const Residuals res = residuals(f, g);
  json edges = json::array();
  for (std::size_t e = 0; e < f.a.size(); ++e) edges.push_back({{"edge", e}, {"a", f.a[e]}, {"b", f.b[e]}});
  json doc{{"lambda", f.lambda},
           {"multiplicity", family.size()},
           {"member", o.member},
           {"vertex_values", std::vector<double>(f.vertex_values.data(), f.vertex_values.data() + f.vertex_values.size())},
           {"edges", std::move(edges)},
           {"residuals",
            {{"continuity_gap", res.continuity_gap},
             {"kirchhoff_max", res.kirchhoff_max},
             {"ode_residual", res.ode_residual}}}};
  return doc.dump(2) + "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Quantum graph eigenvalues via equilateral approximation and Newton-trace"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--seed", o.seed, "Seed for random graphs and lengths");
  app.add_option("--out", o.out, "Output file (default: standard output)");
  app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"auto", "csv", "json"}));

  auto* generate = app.add_subcommand("generate", "Write a random metric graph as JSON");
  generate->add_option("kind", o.kind, "star, path, cycle, diamond or ba")->required();
  generate->add_option("--n", o.n, "Vertex count");
  generate->add_option("--k", o.k, "Edges per new vertex (ba)");
  generate->add_option("--len", o.len, "Length interval lo..hi");
  generate->add_option("--decimals", o.decimals, "Round lengths to this many decimals");

  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues by Newton-trace or exact representation");
  spectrum->add_option("--graph", o.graph, "Graph JSON file")->required();
  spectrum->add_option("--Q", o.Q, "Number of eigenvalues")->check(CLI::PositiveNumber);
  spectrum->set_help_flag("--help", "Print this help message and exit");
  spectrum->add_option("--h", o.h, "Step of the floor/ceil approximations");
  spectrum->add_option("--exact-digits", o.exact_digits, "Reference spectrum on the 10^-d grid");
  spectrum->add_flag("--process-all", o.process_all, "Run every initial guess");

  auto* sweep = app.add_subcommand("sweep", "Floor/ceil estimates over h = 2^-J");
  sweep->add_option("--graph", o.graph, "Graph JSON file")->required();
  sweep->add_option("--Q", o.Q, "Number of eigenvalues")->check(CLI::PositiveNumber);
  sweep->add_option("--J", o.J, "Level range a..b")->required();
  sweep->add_option("--reference-digits", o.reference_digits, "Reference spectrum on the 10^-d grid");

  auto* scan = app.add_subcommand("scan", "Reciprocal condition number of H(z) on a grid");
  scan->add_option("--graph", o.graph, "Graph JSON file")->required();
  scan->add_option("--z", o.z, "Interval a..b")->required();
  scan->add_option("--samples", o.samples, "Number of grid points");

  auto* eigenfunction = app.add_subcommand("eigenfunction", "Sample an eigenfunction on every edge");
  eigenfunction->add_option("--graph", o.graph, "Graph JSON file")->required();
  eigenfunction->add_option("--lambda", o.lambda, "Eigenvalue")->required();
  eigenfunction->add_option("--resolution", o.resolution, "Intervals per edge");
  eigenfunction->add_option("--member", o.member, "Member of the eigenspace basis");
  eigenfunction->add_flag("--refine", o.refine, "Newton-refine lambda first");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    std::string text;
    if (generate->parsed()) text = cmd_generate(o);
    else if (spectrum->parsed()) text = cmd_spectrum(o);
    else if (sweep->parsed()) text = cmd_sweep(o);
    else if (scan->parsed()) text = cmd_scan(o);
    else text = cmd_eigenfunction(o);
    if (o.out.empty()) out << text;
    else write_text(o.out, text);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return e.code() == ErrorCode::Io ? kExitIo : kExitConfig;
  }
}

}  // namespace qgraph::cli
