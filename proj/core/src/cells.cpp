#include "basilica/cells.hpp"

#include <sstream>

namespace basilica::cells {

CellAddress::CellAddress(int head, std::vector<std::uint8_t> tail)
    : head_(static_cast<std::uint8_t>(head)), tail_(std::move(tail)) {
  if (head < 1 || head > 4) throw ValidationError("cell head must be in {1,2,3,4}");
  for (auto s : tail_)
    if (s < 1 || s > 3) throw ValidationError("cell tail symbols must be in {1,2,3}");
}

CellAddress CellAddress::parse(const std::string& text) {
  std::vector<int> symbols;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) throw ValidationError("empty symbol in cell address '" + text + "'");
    size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(part, &pos);
    } catch (const std::exception&) {
      throw ValidationError("bad cell address '" + text + "'");
    }
    if (pos != part.size()) throw ValidationError("bad cell address '" + text + "'");
    symbols.push_back(v);
  }
  if (symbols.empty()) throw ValidationError("empty cell address");
  std::vector<std::uint8_t> tail;
  for (size_t i = 1; i < symbols.size(); ++i) tail.push_back(static_cast<std::uint8_t>(symbols[i]));
  return CellAddress(symbols[0], std::move(tail));
}

CellKind CellAddress::kind() const {
  if (tail_.empty()) return (head_ >= 3) ? CellKind::loop : CellKind::arc;
  return (tail_.back() == 3) ? CellKind::loop : CellKind::arc;
}

CellAddress CellAddress::child(int symbol) const {
  if (symbol < 1 || symbol > 3) throw ValidationError("child symbol must be in {1,2,3}");
  std::vector<std::uint8_t> t = tail_;
  t.push_back(static_cast<std::uint8_t>(symbol));
  return CellAddress(head_, std::move(t));
}

std::string CellAddress::str() const {
  std::string s = std::to_string(head_);
  for (auto t : tail_) {
    s += '.';
    s += std::to_string(t);
  }
  return s;
}

std::array<CellAddress, 3> children(const CellAddress& addr) {
  return {addr.child(1), addr.child(2), addr.child(3)};
}

CellAddress address_dynamics(const CellAddress& addr) {
  const int h = addr.head();
  const auto& tail = addr.tail();
  if (h == 1 || h == 2) {
    return CellAddress(3, tail);
  }
  // Arms consume the first tail symbol.
  if (tail.empty())
    throw ValidationError("address_dynamics is undefined on the bare arm (" + addr.str() + ")");
  static constexpr int kTau[4] = {0, 1, 2, 4};
  const int new_head = kTau[tail.front()];
  std::vector<std::uint8_t> rest(tail.begin() + 1, tail.end());
  return CellAddress(new_head, std::move(rest));
}

int m_exponent(const CellAddress& addr) {
  if (addr.kind() != CellKind::arc)
    throw ValidationError("m_exponent is defined for arc-type cells only, got " + addr.str());
  CellAddress a = addr;
  int m = 0;
  while (!(a.level() == 1 && (a.head() == 1 || a.head() == 2))) {
    a = address_dynamics(a);
    ++m;
  }
  return m;
}

int Multigraph::arc_edge_count() const {
  int c = 0;
  for (const auto& e : edges) c += (e.kind == CellKind::arc);
  return c;
}

int Multigraph::loop_edge_count() const {
  return static_cast<int>(edges.size()) - arc_edge_count();
}

std::vector<int> Multigraph::degrees() const {
  std::vector<int> d(vertex_count, 0);
  for (const auto& e : edges) {
    if (e.kind == CellKind::arc) {
      d[e.v1] += 1;
      d[e.v2] += 1;
    } else {
      d[e.v1] += 2;
    }
  }
  return d;
}

Filtration Filtration::build(int n, int max_level) {
  if (n < 0) throw ValidationError("filtration level must be >= 0");
  if (n > max_level)
    throw CapacityError("filtration level " + std::to_string(n) + " exceeds budget " +
                        std::to_string(max_level));

  Filtration f;
  Multigraph g0;
  g0.level = 0;
  g0.vertex_count = 2; // vertex 0 <-> a, vertex 1 <-> -a
  g0.edges = {
      Cell{CellAddress(1), CellKind::arc, 0, 1, -1},
      Cell{CellAddress(2), CellKind::arc, 0, 1, -1},
      Cell{CellAddress(3), CellKind::loop, 0, 0, -1},
      Cell{CellAddress(4), CellKind::loop, 1, 1, -1},
  };
  f.graphs_.push_back(std::move(g0));

  for (int k = 0; k < n; ++k) {
    Multigraph& prev = f.graphs_.back();
    Multigraph next;
    next.level = k + 1;
    next.vertex_count = prev.vertex_count;
    next.edges.reserve(prev.edges.size() * 3);
    for (auto& parent : prev.edges) {
      const int w = next.vertex_count++;
      parent.midpoint = w;
      const auto kids = children(parent.address);
      if (parent.kind == CellKind::arc) {
        next.edges.push_back(Cell{kids[0], CellKind::arc, parent.v1, w, -1});
        next.edges.push_back(Cell{kids[1], CellKind::arc, w, parent.v2, -1});
      } else {
        next.edges.push_back(Cell{kids[0], CellKind::arc, parent.v1, w, -1});
        next.edges.push_back(Cell{kids[1], CellKind::arc, parent.v1, w, -1});
      }
      next.edges.push_back(Cell{kids[2], CellKind::loop, w, w, -1});
    }
    f.graphs_.push_back(std::move(next));
  }
  return f;
}

const Multigraph& Filtration::graph(int k) const {
  if (k < 0 || k >= static_cast<int>(graphs_.size()))
    throw ValidationError("filtration has no level " + std::to_string(k));
  return graphs_[k];
}

} // namespace basilica::cells
