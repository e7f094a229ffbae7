#include "basilica/forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace basilica::forms {

using cells::CellAddress;
using cells::CellKind;

Scheme Scheme::dyadic() { return Scheme(Kind::dyadic, 0.5); }

Scheme Scheme::conformal(double r1) {
  if (!(r1 > 0.0)) throw ValidationError("conformal scheme needs r1 > 0");
  return Scheme(Kind::conformal, r1);
}

Scheme Scheme::custom(CustomRules rules) {
  Scheme s(Kind::custom, rules.base_r1);
  if (!rules.arc_split) rules.arc_split = [](const CellAddress&) { return 0.5; };
  if (!rules.loop_children)
    rules.loop_children = [](const CellAddress& a) {
      const double r = std::ldexp(1.0, -(a.level() + 1));
      return std::pair<double, double>{r, r};
    };
  s.rules_ = std::make_shared<const CustomRules>(std::move(rules));
  return s;
}

std::string Scheme::name() const {
  switch (kind_) {
    case Kind::dyadic: return "dyadic";
    case Kind::conformal: return "conformal(" + std::to_string(r1_) + ")";
    case Kind::custom: return "custom";
  }
  return "?";
}

double Scheme::resistance(const CellAddress& addr) const {
  if (addr.kind() != CellKind::arc)
    throw ValidationError("resistance is defined on arc-type cells only, got " + addr.str());
  switch (kind_) {
    case Kind::dyadic:
      return std::ldexp(1.0, -addr.level());
    case Kind::conformal:
      return std::exp2(-0.5 * cells::m_exponent(addr)) * r1_;
    case Kind::custom: {
      if (addr.level() == 1) return addr.head() == 1 ? rules_->base_r1 : rules_->base_r2;
      std::vector<std::uint8_t> parent_tail(addr.tail().begin(), addr.tail().end() - 1);
      const int last = addr.tail().back();
      const CellAddress parent(addr.head(), std::move(parent_tail));
      if (parent.kind() == CellKind::loop) {
        const auto pair = rules_->loop_children(parent);
        return last == 1 ? pair.first : pair.second;
      }
      const double r = resistance(parent);
      const double t = rules_->arc_split(parent);
      return last == 1 ? t * r : (1.0 - t) * r;
    }
  }
  throw ValidationError("unknown scheme kind");
}

ValidationReport validate(const Scheme& scheme, int up_to_level) {
  if (up_to_level < 1) throw ValidationError("validate needs up_to_level >= 1");
  ValidationReport rep;
  std::vector<CellAddress> level = {CellAddress(1), CellAddress(2), CellAddress(3),
                                    CellAddress(4)};
  for (int n = 1; n <= up_to_level && rep.passed; ++n) {
    double mx = 0.0;
    for (const auto& a : level) {
      if (a.kind() != CellKind::arc) continue;
      const double r = scheme.resistance(a);
      if (!(r > 0.0) || !std::isfinite(r)) {
        rep.passed = false;
        rep.failure = "nonpositive resistance at address " + a.str();
        break;
      }
      mx = std::max(mx, r);
      const double r1 = scheme.resistance(a.child(1));
      const double r2 = scheme.resistance(a.child(2));
      if (!(r1 > 0.0)) {
        rep.passed = false;
        rep.failure = "nonpositive resistance at address " + a.child(1).str();
        break;
      }
      if (!(r2 > 0.0)) {
        rep.passed = false;
        rep.failure = "nonpositive resistance at address " + a.child(2).str();
        break;
      }
      if (std::fabs(r - (r1 + r2)) > 1e-12 * std::max(1.0, r)) {
        rep.failure = "additive split violated at address " + a.str();
        rep.passed = false;
        break;
      }
    }
    if (!rep.passed) break;
    rep.max_resistance.push_back(mx);
    if (n < up_to_level) {
      std::vector<CellAddress> next;
      next.reserve(level.size() * 3);
      for (const auto& a : level)
        for (const auto& c : cells::children(a)) next.push_back(c);
      level = std::move(next);
    }
  }
  for (size_t i = 1; i < rep.max_resistance.size(); ++i)
    if (rep.max_resistance[i] > rep.max_resistance[i - 1]) rep.decay_monotone = false;
  // Ratio test over the computed prefix as an empirical summability signal.
  if (rep.max_resistance.size() >= 2) {
    const size_t last = rep.max_resistance.size() - 1;
    rep.summability_hint =
        rep.decay_monotone && rep.max_resistance[last] < 0.9 * rep.max_resistance[0];
  }
  if (!rep.passed) {
    rep.decay_monotone = false;
    rep.summability_hint = false;
  }
  return rep;
}

void validate_or_throw(const Scheme& scheme, int up_to_level) {
  const auto rep = validate(scheme, up_to_level);
  if (!rep.passed) throw ValidationError("scheme validation failed: " + rep.failure);
}

Network make_network(const cells::Filtration& f, const Scheme& scheme, int level) {
  const auto& g = f.graph(level);
  Network net;
  net.level = level;
  net.vertex_count = g.vertex_count;
  net.edges.reserve(g.edges.size());
  for (const auto& e : g.edges) {
    const bool loop = e.kind == CellKind::loop;
    net.edges.push_back(Network::Edge{e.v1, e.v2, loop ? 0.0 : scheme.resistance(e.address),
                                      loop, e.address});
  }
  return net;
}

numerics::SymMatrix resistance_laplacian(const Network& net) {
  numerics::SymMatrix l(net.vertex_count);
  for (const auto& e : net.edges) {
    if (e.loop) continue;
    const double c = 1.0 / e.resistance;
    l.add(e.u, e.u, c);
    l.add(e.v, e.v, c);
    l.add(e.u, e.v, -c);
  }
  return l;
}

numerics::SymMatrix trace_form(const cells::Filtration& f, const Scheme& scheme, int from,
                               int to) {
  if (to > from) throw ValidationError("trace_form needs to <= from");
  const auto l = resistance_laplacian(make_network(f, scheme, from));
  std::vector<int> keep(f.vertex_count(to));
  for (size_t i = 0; i < keep.size(); ++i) keep[i] = static_cast<int>(i);
  return numerics::schur_complement(l, keep);
}

double effective_resistance(const Network& net, int x, int y) {
  if (x == y) return 0.0;
  const auto l = resistance_laplacian(net);
  const int n = net.vertex_count;
  std::vector<int> keep;
  keep.reserve(n - 1);
  for (int i = 0; i < n; ++i)
    if (i != y) keep.push_back(i);
  // Grounded Laplacian: delete row/column y, then push unit current at x.
  numerics::SymMatrix lg(n - 1);
  for (int i = 0; i < n - 1; ++i)
    for (int j = i; j < n - 1; ++j) lg.set(i, j, l(keep[i], keep[j]));
  std::vector<double> rhs(n - 1, 0.0);
  int xi = -1;
  for (int i = 0; i < n - 1; ++i)
    if (keep[i] == x) xi = i;
  rhs[xi] = 1.0;
  const auto sol = numerics::solve_spd(lg, rhs);
  return sol[xi];
}

ResistanceOracle::ResistanceOracle(const Network& net) : n_(net.vertex_count) {
  const auto l = resistance_laplacian(net);
  numerics::SymMatrix lg(n_ - 1);
  for (int i = 1; i < n_; ++i)
    for (int j = i; j < n_; ++j) lg.set(i - 1, j - 1, l(i, j));
  numerics::CholeskyFactor chol(lg);
  green_.assign(static_cast<size_t>(n_ - 1) * (n_ - 1), 0.0);
  std::vector<double> e(n_ - 1, 0.0);
  for (int j = 0; j < n_ - 1; ++j) {
    e[j] = 1.0;
    const auto col = chol.solve(e);
    e[j] = 0.0;
    for (int i = 0; i < n_ - 1; ++i) green_[static_cast<size_t>(i) * (n_ - 1) + j] = col[i];
  }
}

double ResistanceOracle::operator()(int x, int y) const {
  if (x == y) return 0.0;
  auto g = [&](int i, int j) { return green_[static_cast<size_t>(i - 1) * (n_ - 1) + (j - 1)]; };
  if (x == 0) return g(y, y);
  if (y == 0) return g(x, x);
  return g(x, x) + g(y, y) - 2.0 * g(x, y);
}

namespace {

std::vector<std::vector<std::pair<int, double>>> arc_adjacency(const Network& net) {
  std::vector<std::vector<std::pair<int, double>>> adj(net.vertex_count);
  for (const auto& e : net.edges) {
    if (e.loop) continue;
    adj[e.u].push_back({e.v, e.resistance});
    adj[e.v].push_back({e.u, e.resistance});
  }
  return adj;
}

std::vector<double> dijkstra(const Network& net, int source, std::vector<int>* pred) {
  const auto adj = arc_adjacency(net);
  std::vector<double> dist(net.vertex_count, std::numeric_limits<double>::infinity());
  if (pred) pred->assign(net.vertex_count, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[source] = 0.0;
  pq.push({0.0, source});
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (const auto& [v, w] : adj[u]) {
      const double nd = d + w;
      if (nd < dist[v]) {
        dist[v] = nd;
        if (pred) (*pred)[v] = u;
        pq.push({nd, v});
      }
    }
  }
  return dist;
}

} // namespace

double local_metric(const Network& net, int x, int y) { return dijkstra(net, x, nullptr)[y]; }

std::vector<double> local_metric_from(const Network& net, int source) {
  return dijkstra(net, source, nullptr);
}

std::vector<int> local_geodesic(const Network& net, int x, int y) {
  std::vector<int> pred;
  dijkstra(net, x, &pred);
  std::vector<int> path_vertices;
  for (int v = y; v != -1; v = pred[v]) {
    path_vertices.push_back(v);
    if (v == x) break;
  }
  std::reverse(path_vertices.begin(), path_vertices.end());
  // Convert the vertex path to edge indices, picking the cheapest parallel arc.
  std::vector<int> edges;
  for (size_t i = 0; i + 1 < path_vertices.size(); ++i) {
    int best = -1;
    for (size_t k = 0; k < net.edges.size(); ++k) {
      const auto& e = net.edges[k];
      if (e.loop) continue;
      const bool joins = (e.u == path_vertices[i] && e.v == path_vertices[i + 1]) ||
                         (e.v == path_vertices[i] && e.u == path_vertices[i + 1]);
      if (joins && (best < 0 || e.resistance < net.edges[best].resistance))
        best = static_cast<int>(k);
    }
    edges.push_back(best);
  }
  return edges;
}

std::vector<double> harmonic_extension(const cells::Filtration& f, const Scheme& scheme,
                                       const std::vector<double>& boundary, int m, int n) {
  if (m > n) throw ValidationError("harmonic_extension needs m <= n");
  if (static_cast<int>(boundary.size()) != f.vertex_count(m))
    throw ValidationError("harmonic_extension: boundary size must match level " +
                          std::to_string(m));
  std::vector<double> vals = boundary;
  vals.resize(f.vertex_count(n));
  for (int k = m; k < n; ++k) {
    const auto& g = f.graph(k);
    for (const auto& e : g.edges) {
      const int w = e.midpoint;
      if (e.kind == CellKind::loop) {
        vals[w] = vals[e.v1];
      } else {
        const double r1 = scheme.resistance(e.address.child(1));
        const double r2 = scheme.resistance(e.address.child(2));
        vals[w] = (r2 * vals[e.v1] + r1 * vals[e.v2]) / (r1 + r2);
      }
    }
  }
  return vals;
}

std::vector<double> harmonic_minimizer(const cells::Filtration& f, const Scheme& scheme,
                                       const std::vector<double>& boundary, int m, int n) {
  if (m > n) throw ValidationError("harmonic_minimizer needs m <= n");
  const auto net = make_network(f, scheme, n);
  const auto l = resistance_laplacian(net);
  const int nb = f.vertex_count(m);
  const int ni = net.vertex_count - nb;
  if (ni == 0) return boundary;
  numerics::SymMatrix lii(ni);
  for (int i = 0; i < ni; ++i)
    for (int j = i; j < ni; ++j) lii.set(i, j, l(nb + i, nb + j));
  std::vector<double> rhs(ni, 0.0);
  for (int i = 0; i < ni; ++i) {
    double s = 0.0;
    for (int b = 0; b < nb; ++b) s -= l(nb + i, b) * boundary[b];
    rhs[i] = s;
  }
  const auto interior = numerics::solve_spd(lii, rhs);
  std::vector<double> vals = boundary;
  vals.resize(net.vertex_count);
  for (int i = 0; i < ni; ++i) vals[nb + i] = interior[i];
  return vals;
}

double energy(const Network& net, const std::vector<double>& f) {
  return energy_bilinear(net, f, f);
}

double energy_bilinear(const Network& net, const std::vector<double>& f,
                       const std::vector<double>& g) {
  double e = 0.0;
  for (const auto& edge : net.edges) {
    if (edge.loop) continue;
    e += (f[edge.u] - f[edge.v]) * (g[edge.u] - g[edge.v]) / edge.resistance;
  }
  return e;
}

double normal_derivative(const Network& net, const std::vector<double>& f, int x) {
  double s = 0.0;
  for (const auto& e : net.edges) {
    if (e.loop) continue;
    if (e.u == x) s += (f[x] - f[e.v]) / e.resistance;
    else if (e.v == x) s += (f[x] - f[e.u]) / e.resistance;
  }
  return s;
}

Rational bernoulli_mass(const CellAddress& addr) {
  std::int64_t den = 4;
  for (int i = 1; i < addr.level(); ++i) den *= 3;
  return Rational(1, den);
}

Rational balanced_mass(const CellAddress& addr) {
  CellAddress a = addr;
  int k = 0;
  while (a.level() > 1) {
    a = cells::address_dynamics(a);
    ++k;
  }
  const Rational base = (a.head() <= 2) ? Rational(1, 6) : Rational(1, 3);
  std::int64_t den = 1;
  for (int i = 0; i < k; ++i) den *= 2;
  return base * Rational(1, den);
}

double local_resistance_spine(const CellAddress& addr, const Scheme& scheme) {
  return scheme.resistance(addr); // throws on loop-type input
}

double local_resistance_circle(const CellAddress& addr, const Scheme& scheme) {
  if (addr.kind() != CellKind::loop)
    throw ValidationError("circle measure is defined for loop-type cells, got " + addr.str());
  return scheme.resistance(addr.child(1)) + scheme.resistance(addr.child(2));
}

double local_resistance_central_circle(const Scheme& scheme) {
  return scheme.resistance(CellAddress(1)) + scheme.resistance(CellAddress(2));
}

double measure(const CellAddress& addr, MeasureKind kind, const Scheme& scheme) {
  switch (kind) {
    case MeasureKind::bernoulli: return bernoulli_mass(addr).to_double();
    case MeasureKind::balanced: return balanced_mass(addr).to_double();
    case MeasureKind::local_resistance:
      if (addr.kind() == CellKind::loop)
        throw ValidationError(
            "local resistance measure of a whole loop-type cell is undefined; query its "
            "circle instead (cell " +
            addr.str() + ")");
      return local_resistance_spine(addr, scheme);
  }
  throw ValidationError("unknown measure kind");
}

double max_cell_s_diameter(const cells::Filtration& f, const Scheme& scheme, int cell_level,
                           int eval_level) {
  if (cell_level < 1) throw ValidationError("cell_level must be >= 1");
  if (eval_level < cell_level) throw ValidationError("eval_level must be >= cell_level");
  const auto net = make_network(f, scheme, eval_level);
  // Collect, per cell of the given level, all vertices of eval_level lying in it
  // by address prefix on the eval-level edges.
  const auto& ge = f.graph(eval_level);
  double worst = 0.0;
  std::vector<CellAddress> level_cells;
  {
    std::vector<CellAddress> cur = {CellAddress(1), CellAddress(2), CellAddress(3),
                                    CellAddress(4)};
    for (int l = 1; l < cell_level; ++l) {
      std::vector<CellAddress> nxt;
      for (const auto& a : cur)
        for (const auto& c : cells::children(a)) nxt.push_back(c);
      cur = std::move(nxt);
    }
    level_cells = std::move(cur);
  }
  for (const auto& cell : level_cells) {
    std::vector<int> verts;
    for (const auto& e : ge.edges) {
      if (e.address.head() != cell.head()) continue;
      const auto& t = e.address.tail();
      const auto& ct = cell.tail();
      if (t.size() < ct.size() || !std::equal(ct.begin(), ct.end(), t.begin())) continue;
      verts.push_back(e.v1);
      verts.push_back(e.v2);
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    for (int v : verts) {
      const auto dist = local_metric_from(net, v);
      for (int w : verts) worst = std::max(worst, dist[w]);
    }
  }
  return worst;
}

} // namespace basilica::forms
