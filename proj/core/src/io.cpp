#include "basilica/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace basilica::io {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

const char* kind_name(cells::CellKind k) {
  return k == cells::CellKind::arc ? "arc" : "loop";
}

} // namespace

std::string graph_json(const cells::Multigraph& g) {
  std::ostringstream os;
  os << "{\"level\":" << g.level << ",\"vertices\":[";
  for (int i = 0; i < g.vertex_count; ++i) os << (i ? "," : "") << i;
  os << "],\"edges\":[";
  bool first = true;
  for (const auto& e : g.edges) {
    if (!first) os << ",";
    first = false;
    os << "{\"u\":" << e.v1 << ",\"v\":" << e.v2 << ",\"address\":\"" << e.address.str()
       << "\",\"kind\":\"" << kind_name(e.kind) << "\"}";
  }
  os << "]}";
  return os.str();
}

std::string graph_json(const graphdir::LabeledGraph& g) {
  std::ostringstream os;
  os << "{\"level\":" << g.generation << ",\"vertices\":[";
  for (int i = 0; i < g.vertex_count; ++i) os << (i ? "," : "") << i;
  os << "],\"edges\":[";
  bool first = true;
  for (const auto& e : g.edges) {
    if (!first) os << ",";
    first = false;
    os << "{\"u\":" << e.u << ",\"v\":" << e.v << ",\"address\":\"" << e.address
       << "\",\"kind\":\"" << (e.loop ? "loop" : "arc") << "\",\"label\":\"" << e.label
       << "\",\"mass\":\"" << e.mass.str() << "\",\"resistance\":"
       << (e.resistance ? fmt(*e.resistance) : "null") << "}";
  }
  os << "]}";
  return os.str();
}

std::string spectrum_json(const decimation::GraphSpectrum& spec) {
  std::ostringstream os;
  os << "[";
  bool first = true;
  for (const auto& a : spec.atoms) {
    if (!first) os << ",";
    first = false;
    os << "{\"z\":" << fmt(a.z) << ",\"mult\":" << a.mult << ",\"birth\":\""
       << (a.birth == decimation::Birth::exceptional ? "exceptional" : "initial")
       << "\",\"m\":" << a.m << ",\"lineage\":\"" << a.lineage << "\"}";
  }
  os << "]";
  return os.str();
}

std::string fractal_spectrum_json(const std::vector<spectra::FractalAtom>& atoms) {
  std::ostringstream os;
  os << "[";
  bool first = true;
  for (const auto& a : atoms) {
    if (!first) os << ",";
    first = false;
    os << "{\"lambda\":" << fmt(a.lambda) << ",\"mult\":" << a.mult << ",\"n0\":" << a.n0
       << ",\"m\":" << a.m << ",\"branch\":\"" << a.branch << "\",\"kind\":\""
       << (a.kind == spectra::FractalAtom::Kind::dirichlet ? "dirichlet" : "neumann-candidate")
       << "\"}";
  }
  os << "]";
  return os.str();
}

std::string eigenvalues_csv(const std::vector<double>& values) {
  std::ostringstream os;
  os << "index,value\n";
  for (size_t i = 0; i < values.size(); ++i) os << i << "," << fmt(values[i]) << "\n";
  return os.str();
}

std::string counting_csv(const std::vector<std::pair<double, long long>>& atoms) {
  auto sorted = atoms;
  std::sort(sorted.begin(), sorted.end());
  std::ostringstream os;
  os << "lambda,N\n";
  long long count = 0;
  for (const auto& [lambda, mult] : sorted) {
    count += mult;
    os << fmt(lambda) << "," << count << "\n";
  }
  return os.str();
}

std::string eigenfunction_csv(const std::vector<std::vector<double>>& basis) {
  std::ostringstream os;
  os << "vertex_id";
  if (basis.size() == 1) {
    os << ",value\n";
  } else {
    for (size_t k = 0; k < basis.size(); ++k) os << ",value_" << k;
    os << "\n";
  }
  if (basis.empty()) return os.str();
  for (size_t i = 0; i < basis[0].size(); ++i) {
    os << i;
    for (const auto& v : basis) os << "," << fmt(v[i]);
    os << "\n";
  }
  return os.str();
}

std::string resistances_csv(const forms::Network& net) {
  std::ostringstream os;
  os << "address,resistance\n";
  for (const auto& e : net.edges) {
    if (e.loop) continue;
    os << e.address.str() << "," << fmt(e.resistance) << "\n";
  }
  return os.str();
}

std::string layout_csv(const std::vector<std::array<double, 2>>& pos) {
  std::ostringstream os;
  os << "vertex_id,x,y\n";
  for (size_t i = 0; i < pos.size(); ++i)
    os << i << "," << fmt(pos[i][0]) << "," << fmt(pos[i][1]) << "\n";
  return os.str();
}

std::string scatter_csv(const std::vector<geometry::Complex>& pts) {
  std::ostringstream os;
  os << "re,im\n";
  for (const auto& z : pts) os << fmt(z.real()) << "," << fmt(z.imag()) << "\n";
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file " + path);
  out << content;
  if (!out) throw ValidationError("failed writing output file " + path);
}

} // namespace basilica::io
