#include "basilica/cells.hpp"
#include "basilica/decimation.hpp"
#include "basilica/errors.hpp"
#include "basilica/forms.hpp"
#include "basilica/geometry.hpp"
#include "basilica/graphdir.hpp"
#include "basilica/invariants.hpp"
#include "basilica/io.hpp"
#include "basilica/rng.hpp"
#include "basilica/spectra.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace basilica;
using nlohmann::json;

struct RunConfig {
  std::string scheme = "dyadic"; // dyadic | conformal | path to a custom rules file
  double p = 0.25;
  double q = 0.25;
  double r1 = 0.5;
  int level = 3;
  std::string measure = "bernoulli";
  std::string output = "-";
  std::string format = "json";
  std::uint64_t seed = 1;
};

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw ValidationError("config parse error in " + path + ": " + e.what());
  }
  RunConfig cfg;
  static const std::vector<std::string> allowed = {"scheme", "p",      "q",      "r1",  "level",
                                                   "measure", "output", "format", "seed"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ValidationError("unknown config key '" + key + "' in " + path);
    if (key == "scheme") cfg.scheme = value.get<std::string>();
    else if (key == "p") cfg.p = value.get<double>();
    else if (key == "q") cfg.q = value.get<double>();
    else if (key == "r1") cfg.r1 = value.get<double>();
    else if (key == "level") cfg.level = value.get<int>();
    else if (key == "measure") cfg.measure = value.get<std::string>();
    else if (key == "output") cfg.output = value.get<std::string>();
    else if (key == "format") cfg.format = value.get<std::string>();
    else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
  }
  return cfg;
}

forms::Scheme custom_scheme_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open custom scheme file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw ValidationError("custom scheme parse error: " + std::string(e.what()));
  }
  static const std::vector<std::string> allowed = {"base_r1", "base_r2", "arc_split",
                                                   "loop_pair", "loop_decay"};
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ValidationError("unknown custom scheme key '" + key + "'");
  }
  forms::CustomRules rules;
  rules.base_r1 = doc.value("base_r1", 0.5);
  rules.base_r2 = doc.value("base_r2", 0.5);
  const double split = doc.value("arc_split", 0.5);
  rules.arc_split = [split](const cells::CellAddress&) { return split; };
  double pair1 = 0.25, pair2 = 0.25;
  if (doc.contains("loop_pair")) {
    const auto& lp = doc["loop_pair"];
    if (!lp.is_array() || lp.size() != 2)
      throw ValidationError("loop_pair must be a two-element array");
    pair1 = lp[0].get<double>();
    pair2 = lp[1].get<double>();
  }
  const double decay = doc.value("loop_decay", 0.5);
  rules.loop_children = [pair1, pair2, decay](const cells::CellAddress& a) {
    const double s = std::pow(decay, a.level() - 1);
    return std::pair<double, double>{pair1 * s, pair2 * s};
  };
  return forms::Scheme::custom(std::move(rules));
}

forms::Scheme make_scheme(const RunConfig& cfg) {
  if (cfg.scheme == "dyadic") return forms::Scheme::dyadic();
  if (cfg.scheme == "conformal") return forms::Scheme::conformal(cfg.r1);
  return custom_scheme_from_file(cfg.scheme);
}

void emit(const RunConfig& cfg, const std::string& content) {
  if (cfg.output == "-") {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << "\n";
  } else {
    io::write_file(cfg.output, content);
  }
}

int worker_count_from_env() {
  const char* env = std::getenv("BASILICA_WORKERS");
  if (!env) return 1;
  const int v = std::atoi(env);
  return v >= 1 ? v : 1;
}

// ---------------------------------------------------------------------------

int cmd_graph(const RunConfig& cfg, const std::string& family, const std::string& layout_path) {
  std::string doc;
  std::string layout_csv;
  if (family == "self-similar") {
    const auto f = cells::Filtration::build(cfg.level);
    doc = io::graph_json(f.graph(cfg.level));
    if (!layout_path.empty())
      layout_csv = io::layout_csv(geometry::layout_self_similar(f, cfg.level));
  } else if (family == "graph-directed") {
    const auto g = graphdir::generation(cfg.level, cfg.r1);
    doc = io::graph_json(g);
    if (!layout_path.empty())
      layout_csv = io::layout_csv(geometry::layout_graph_directed(cfg.level));
  } else {
    throw ValidationError("unknown graph family '" + family + "'");
  }
  emit(cfg, doc);
  if (!layout_path.empty()) io::write_file(layout_path, layout_csv);
  return 0;
}

int cmd_spectrum(const RunConfig& cfg, const std::string& mode, const std::string& norm_name) {
  if (mode == "decimation") {
    const auto spec = decimation::graph_spectrum(cfg.level, {cfg.p, cfg.q});
    if (cfg.format == "csv") {
      std::ostringstream os;
      os << "z,mult,birth,m,lineage\n";
      for (const auto& a : spec.atoms)
        os << io::fmt(a.z) << "," << a.mult << ","
           << (a.birth == decimation::Birth::exceptional ? "exceptional" : "initial") << ","
           << a.m << "," << a.lineage << "\n";
      emit(cfg, os.str());
    } else {
      emit(cfg, io::spectrum_json(spec));
    }
    return 0;
  }
  if (mode == "graph-directed") {
    const auto norm = (norm_name == "stationary") ? spectra::GdNormalization::stationary
                                                  : spectra::GdNormalization::conformal;
    const auto spec = spectra::graphdirected_spectrum(cfg.level, cfg.r1, norm);
    if (cfg.format == "csv") {
      emit(cfg, io::eigenvalues_csv(spec.values));
    } else {
      std::ostringstream os;
      os << "[";
      for (size_t i = 0; i < spec.values.size(); ++i)
        os << (i ? "," : "") << io::fmt(spec.values[i]);
      os << "]";
      emit(cfg, os.str());
    }
    return 0;
  }
  throw ValidationError("unknown spectrum mode '" + mode + "'");
}

int cmd_fractal(const RunConfig& cfg, int max_n0, bool with_neumann) {
  auto atoms = spectra::dirichlet_spectrum(max_n0);
  if (with_neumann) {
    const auto extra = spectra::neumann_candidates(max_n0, cfg.q);
    atoms.insert(atoms.end(), extra.begin(), extra.end());
  }
  emit(cfg, io::fractal_spectrum_json(atoms));
  return 0;
}

int cmd_eigenfunction(const RunConfig& cfg, const std::string& birth, const std::string& lineage,
                      const std::string& initial_seed) {
  decimation::DecimationParams prm{cfg.p, cfg.q};
  decimation::SpectrumAtom atom;
  atom.lineage = lineage;
  atom.m = static_cast<int>(lineage.size());
  for (char c : lineage)
    if (c != '-' && c != '+') throw ValidationError("lineage must consist of '-' and '+'");
  if (birth == "exceptional") {
    atom.birth = decimation::Birth::exceptional;
    atom.seed = 2.0 * cfg.p;
  } else if (birth == "initial") {
    atom.birth = decimation::Birth::initial;
    if (atom.m != cfg.level)
      throw ValidationError("initial atoms need one lineage symbol per level");
    atom.seed = (initial_seed == "zero") ? 0.0 : 2.0 * cfg.q;
  } else {
    throw ValidationError("birth must be 'initial' or 'exceptional'");
  }
  double z = atom.seed;
  for (char c : lineage) {
    const auto [lo, hi] = decimation::preimages(z, cfg.p);
    z = (c == '-') ? lo : hi;
  }
  atom.z = z;
  atom.mult = 1;
  if (atom.birth == decimation::Birth::exceptional) {
    long long mult = 2;
    for (int i = 0; i < cfg.level - atom.m - 1; ++i) mult *= 3;
    atom.mult = mult;
  }
  const auto f = cells::Filtration::build(cfg.level);
  const auto basis = decimation::eigenfunction_basis(f, atom, cfg.level, prm);
  emit(cfg, io::eigenfunction_csv(basis));
  return 0;
}

int cmd_resistance(const RunConfig& cfg, const std::string& pairs_arg, int sample) {
  const auto scheme = make_scheme(cfg);
  forms::validate_or_throw(scheme, std::max(1, cfg.level));
  const auto f = cells::Filtration::build(cfg.level);
  const auto net = forms::make_network(f, scheme, cfg.level);
  std::vector<std::pair<int, int>> pairs;
  if (!pairs_arg.empty()) {
    std::stringstream ss(pairs_arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos)
        throw ValidationError("pairs must look like 'u:v,u:v', got '" + item + "'");
      pairs.push_back({std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1))});
    }
  }
  Rng rng(cfg.seed);
  for (int i = 0; i < sample; ++i) {
    const int x = static_cast<int>(rng.below(net.vertex_count));
    int y = static_cast<int>(rng.below(net.vertex_count));
    if (y == x) y = (y + 1) % net.vertex_count;
    pairs.push_back({x, y});
  }
  if (pairs.empty()) pairs = {{0, 1}};
  for (const auto& [x, y] : pairs)
    if (x < 0 || y < 0 || x >= net.vertex_count || y >= net.vertex_count)
      throw ValidationError("vertex pair out of range");
  const forms::ResistanceOracle oracle(net);
  std::ostringstream os;
  os << "x,y,R,S\n";
  for (const auto& [x, y] : pairs)
    os << x << "," << y << "," << io::fmt(oracle(x, y)) << ","
       << io::fmt(forms::local_metric(net, x, y)) << "\n";
  emit(cfg, os.str());
  return 0;
}

int cmd_measure(const RunConfig& cfg) {
  const auto scheme = make_scheme(cfg);
  std::vector<cells::CellAddress> level_cells = {cells::CellAddress(1), cells::CellAddress(2),
                                                 cells::CellAddress(3), cells::CellAddress(4)};
  for (int l = 1; l < cfg.level; ++l) {
    std::vector<cells::CellAddress> next;
    for (const auto& a : level_cells)
      for (const auto& c : cells::children(a)) next.push_back(c);
    level_cells = std::move(next);
  }
  std::ostringstream os;
  os << "address,kind,value\n";
  for (const auto& a : level_cells) {
    if (cfg.measure == "bernoulli") {
      os << a.str() << ",bernoulli," << forms::bernoulli_mass(a).str() << "\n";
    } else if (cfg.measure == "balanced") {
      os << a.str() << ",balanced," << forms::balanced_mass(a).str() << "\n";
    } else if (cfg.measure == "local-resistance") {
      if (a.kind() == cells::CellKind::arc)
        os << a.str() << ",local-resistance,"
           << io::fmt(forms::local_resistance_spine(a, scheme)) << "\n";
      else
        os << a.str() << ",local-resistance-circle,"
           << io::fmt(forms::local_resistance_circle(a, scheme)) << "\n";
    } else {
      throw ValidationError("unknown measure kind '" + cfg.measure + "'");
    }
  }
  emit(cfg, os.str());
  return 0;
}

int cmd_dimension(const RunConfig& cfg, const std::string& mode, double lambda_min,
                  double lambda_max) {
  std::ostringstream os;
  if (mode == "self-similar") {
    const auto spec = decimation::graph_spectrum(cfg.level, {cfg.p, cfg.q});
    std::vector<std::pair<double, long long>> atoms;
    const double scale = std::pow(6.0, cfg.level);
    for (const auto& a : spec.atoms)
      if (a.z > 0.0) atoms.push_back({scale * a.z, a.mult});
    if (lambda_min <= 0.0) lambda_min = 36.0;
    if (lambda_max <= 0.0) lambda_max = 46656.0;
    const auto fit = spectra::weyl_fit(atoms, lambda_min, lambda_max);
    const double expected = std::log(3.0) / std::log(6.0);
    os << "{\"mode\":\"self-similar\",\"level\":" << cfg.level << ",\"slope\":"
       << io::fmt(fit.slope) << ",\"expected_slope\":" << io::fmt(expected)
       << ",\"d_s_estimate\":" << io::fmt(2.0 * fit.slope) << ",\"d_s_expected\":"
       << io::fmt(2.0 * expected) << ",\"points\":" << fit.points << "}";
  } else if (mode == "graph-directed") {
    const auto spec = spectra::graphdirected_spectrum(cfg.level, cfg.r1);
    std::vector<std::pair<double, long long>> atoms;
    for (double v : spec.values)
      if (v > 1e-9) atoms.push_back({v, 1});
    if (lambda_min <= 0.0) lambda_min = 50.0;
    if (lambda_max <= 0.0) lambda_max = 5e4;
    const auto fit = spectra::weyl_fit(atoms, lambda_min, lambda_max);
    const auto [s, ds] = spectra::symbolic_ds();
    os << "{\"mode\":\"graph-directed\",\"level\":" << cfg.level << ",\"slope\":"
       << io::fmt(fit.slope) << ",\"expected_slope\":" << io::fmt(s.to_double())
       << ",\"s_exact\":\"" << s.str() << "\",\"d_s_exact\":\"" << ds.str()
       << "\",\"points\":" << fit.points << "}";
  } else {
    throw ValidationError("unknown dimension mode '" + mode + "'");
  }
  emit(cfg, os.str());
  return 0;
}

int cmd_julia(const RunConfig& cfg, int depth) {
  emit(cfg, io::scatter_csv(geometry::backward_orbit(depth)));
  return 0;
}

int cmd_check() {
  const auto results = invariants::run_all(worker_count_from_env());
  bool all_ok = true;
  for (const auto& r : results) {
    std::printf("[%s] %s/%s (%.2fs)%s%s\n", r.passed ? "PASS" : "FAIL", r.module.c_str(),
                r.name.c_str(), r.seconds, r.passed ? "" : ": ", r.detail.c_str());
    all_ok = all_ok && r.passed;
  }
  std::printf("%zu checks, %s\n", results.size(), all_ok ? "all passed" : "FAILURES present");
  return all_ok ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
  // The config file provides defaults; command-line flags override it.
  RunConfig cfg;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        cfg = load_config(argv[i + 1]);
      } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
      }
    }
  }

  CLI::App app{"Resistance forms, spectral decimation, and Laplacian spectra on the basilica "
               "Julia set graph approximations"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file with defaults");

  std::string family = "self-similar", layout_path;
  auto* graph = app.add_subcommand("graph", "Emit a level graph as JSON");
  graph->add_option("--family", family, "self-similar | graph-directed");
  graph->add_option("--level", cfg.level, "level / generation");
  graph->add_option("--r1", cfg.r1, "base resistance for graph-directed output");
  graph->add_option("--layout", layout_path, "also write a layout CSV to this path");
  graph->add_option("--output", cfg.output, "output path or -");

  std::string mode = "decimation", norm_name = "conformal";
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of a level Laplacian");
  spectrum->add_option("--mode", mode, "decimation | graph-directed");
  spectrum->add_option("--level", cfg.level, "level / generation");
  spectrum->add_option("--p", cfg.p, "midpoint exit probability");
  spectrum->add_option("--q", cfg.q, "level-0 seed weight");
  spectrum->add_option("--r1", cfg.r1, "base resistance (graph-directed)");
  spectrum->add_option("--normalization", norm_name, "conformal | stationary (graph-directed)");
  spectrum->add_option("--format", cfg.format, "json | csv");
  spectrum->add_option("--output", cfg.output, "output path or -");

  int max_n0 = 4;
  bool with_neumann = false;
  auto* fractal = app.add_subcommand("fractal", "Renormalized-limit eigenvalue atoms");
  fractal->add_option("--max-n0", max_n0, "largest birth level");
  fractal->add_flag("--with-neumann", with_neumann, "include unverified Neumann candidates");
  fractal->add_option("--q", cfg.q, "level-0 seed weight for Neumann candidates");
  fractal->add_option("--output", cfg.output, "output path or -");

  std::string birth = "exceptional", lineage, initial_seed = "two-q";
  auto* eig = app.add_subcommand("eigenfunction", "Eigenfunction basis for one spectrum atom");
  eig->add_option("--level", cfg.level, "graph level");
  eig->add_option("--p", cfg.p, "midpoint exit probability");
  eig->add_option("--q", cfg.q, "level-0 seed weight");
  eig->add_option("--birth", birth, "initial | exceptional");
  eig->add_option("--lineage", lineage, "branch word over -+");
  eig->add_option("--initial-seed", initial_seed, "zero | two-q (initial atoms)");
  eig->add_option("--output", cfg.output, "output path or -");

  std::string pairs_arg;
  int sample = 0;
  auto* resistance = app.add_subcommand("resistance", "Effective resistance and local metric");
  resistance->add_option("--scheme", cfg.scheme, "dyadic | conformal | custom file");
  resistance->add_option("--r1", cfg.r1, "conformal base resistance");
  resistance->add_option("--level", cfg.level, "graph level");
  resistance->add_option("--pairs", pairs_arg, "explicit pairs u:v,u:v");
  resistance->add_option("--sample", sample, "additional random pairs");
  resistance->add_option("--seed", cfg.seed, "sampling seed");
  resistance->add_option("--output", cfg.output, "output path or -");

  auto* measure = app.add_subcommand("measure", "Per-cell measure table");
  measure->add_option("--kind", cfg.measure, "bernoulli | balanced | local-resistance");
  measure->add_option("--level", cfg.level, "cell level");
  measure->add_option("--scheme", cfg.scheme, "scheme for local-resistance");
  measure->add_option("--r1", cfg.r1, "conformal base resistance");
  measure->add_option("--output", cfg.output, "output path or -");

  std::string dim_mode = "self-similar";
  double lambda_min = 0.0, lambda_max = 0.0;
  auto* dimension = app.add_subcommand("dimension", "Eigenvalue-counting slope and exponents");
  dimension->add_option("--mode", dim_mode, "self-similar | graph-directed");
  dimension->add_option("--level", cfg.level, "level / generation");
  dimension->add_option("--p", cfg.p, "midpoint exit probability");
  dimension->add_option("--q", cfg.q, "level-0 seed weight");
  dimension->add_option("--r1", cfg.r1, "base resistance");
  dimension->add_option("--lambda-min", lambda_min, "fit window lower end");
  dimension->add_option("--lambda-max", lambda_max, "fit window upper end");
  dimension->add_option("--output", cfg.output, "output path or -");

  int depth = 10;
  auto* julia = app.add_subcommand("julia", "Backward-orbit scatter of the Julia set");
  julia->add_option("--depth", depth, "inverse-iteration depth");
  julia->add_option("--output", cfg.output, "output path or -");

  app.add_subcommand("check", "Run the full invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (graph->parsed()) return cmd_graph(cfg, family, layout_path);
    if (spectrum->parsed()) return cmd_spectrum(cfg, mode, norm_name);
    if (fractal->parsed()) return cmd_fractal(cfg, max_n0, with_neumann);
    if (eig->parsed()) return cmd_eigenfunction(cfg, birth, lineage, initial_seed);
    if (resistance->parsed()) return cmd_resistance(cfg, pairs_arg, sample);
    if (measure->parsed()) return cmd_measure(cfg);
    if (dimension->parsed()) return cmd_dimension(cfg, dim_mode, lambda_min, lambda_max);
    if (julia->parsed()) return cmd_julia(cfg, depth);
    return cmd_check();
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
