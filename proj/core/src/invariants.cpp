#include "basilica/invariants.hpp"

#include "basilica/cells.hpp"
#include "basilica/decimation.hpp"
#include "basilica/errors.hpp"
#include "basilica/forms.hpp"
#include "basilica/geometry.hpp"
#include "basilica/graphdir.hpp"
#include "basilica/numerics.hpp"
#include "basilica/rng.hpp"
#include "basilica/spectra.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <sstream>
#include <thread>

namespace basilica::invariants {

namespace {

using cells::CellAddress;
using cells::CellKind;
using cells::Filtration;

void expect(bool cond, const std::string& msg) {
  if (!cond) throw InvariantError(msg);
}

long long pow3(int k) {
  long long v = 1;
  while (k-- > 0) v *= 3;
  return v;
}

std::vector<CellAddress> addresses_of_level(int level) {
  std::vector<CellAddress> cur = {CellAddress(1), CellAddress(2), CellAddress(3),
                                  CellAddress(4)};
  for (int l = 1; l < level; ++l) {
    std::vector<CellAddress> nxt;
    nxt.reserve(cur.size() * 3);
    for (const auto& a : cur)
      for (const auto& c : cells::children(a)) nxt.push_back(c);
    cur = std::move(nxt);
  }
  return cur;
}

double max_entry_diff(const numerics::SymMatrix& a, const numerics::SymMatrix& b) {
  expect(a.order() == b.order(), "matrix order mismatch");
  double worst = 0.0;
  for (int i = 0; i < a.order(); ++i)
    for (int j = 0; j < a.order(); ++j) worst = std::max(worst, std::fabs(a(i, j) - b(i, j)));
  return worst;
}

// ---------------------------------------------------------------- cells ----

void check_cells_counts() {
  const auto f = Filtration::build(8);
  for (int n = 0; n <= 8; ++n) {
    expect(f.vertex_count(n) == 2 * pow3(n), "vertex count at level " + std::to_string(n));
    // Edges of the level-n graph are the cells of address length n+1.
    expect(static_cast<long long>(f.graph(n).edges.size()) == 4 * pow3(n),
           "cell count at level " + std::to_string(n + 1));
  }
}

void check_cells_degree_regularity() {
  const auto f = Filtration::build(8);
  for (int n = 1; n <= 8; ++n) {
    for (int d : f.graph(n).degrees())
      expect(d == 4, "degree != 4 at level " + std::to_string(n));
  }
}

void check_cells_m_exponent_split() {
  for (int level = 1; level <= 5; ++level) {
    for (const auto& a : addresses_of_level(level)) {
      if (a.kind() != CellKind::arc) continue;
      const int m = cells::m_exponent(a);
      expect(cells::m_exponent(a.child(1)) == m + 2, "m(a.1) != m(a)+2 at " + a.str());
      expect(cells::m_exponent(a.child(2)) == m + 2, "m(a.2) != m(a)+2 at " + a.str());
    }
  }
}

void check_cells_dynamics_kind() {
  for (int level = 2; level <= 6; ++level) {
    for (const auto& a : addresses_of_level(level)) {
      if (a.kind() != CellKind::arc) continue;
      expect(cells::address_dynamics(a).kind() == CellKind::arc,
             "dynamics broke arc kind at " + a.str());
    }
  }
  expect(cells::address_dynamics(CellAddress(1)) == CellAddress(3), "(1) must map to (3)");
  expect(cells::address_dynamics(CellAddress(2)) == CellAddress(3), "(2) must map to (3)");
}

void check_cells_vertex_id_stability() {
  const auto f8 = Filtration::build(8);
  for (int n = 0; n <= 7; ++n) {
    const auto fn = Filtration::build(n);
    const auto& a = f8.graph(n);
    const auto& b = fn.graph(n);
    expect(a.vertex_count == b.vertex_count, "vertex count drift at level " + std::to_string(n));
    expect(a.edges.size() == b.edges.size(), "edge count drift at level " + std::to_string(n));
    for (size_t i = 0; i < a.edges.size(); ++i) {
      expect(a.edges[i].v1 == b.edges[i].v1 && a.edges[i].v2 == b.edges[i].v2 &&
                 a.edges[i].address == b.edges[i].address,
             "vertex ids not stable at level " + std::to_string(n));
    }
  }
}

// ------------------------------------------------------------- graphdir ----

void check_graphdir_trace_compatibility() {
  auto g = graphdir::seed_graph(0.5);
  for (int n = 1; n <= 8; ++n) g = graphdir::substitute(g);
  // Walk back down: Schur of each generation onto the previous vertex set.
  auto upper = g;
  for (int n = 8; n >= 2; --n) {
    auto lower = graphdir::generation(n, 0.5);
    const auto lu = graphdir::resistance_laplacian(upper);
    const auto ll = graphdir::resistance_laplacian(lower);
    std::vector<int> keep(lower.vertex_count);
    for (size_t i = 0; i < keep.size(); ++i) keep[i] = static_cast<int>(i);
    const double diff = max_entry_diff(numerics::schur_complement(lu, keep), ll);
    expect(diff < 1e-9, "graph-directed trace mismatch " + std::to_string(diff) +
                            " at generation " + std::to_string(n));
    upper = std::move(lower);
  }
}

void check_graphdir_resistance_scaling() {
  const double r1 = 0.5;
  for (int n = 1; n <= 10; ++n) {
    const auto g = graphdir::generation(n, r1);
    for (const auto& e : g.edges) {
      if (e.loop) continue;
      const double want = r1 * std::pow(std::sqrt(2.0), 1.0 - e.generation);
      expect(std::fabs(*e.resistance - want) <= 1e-14 * want,
             "resistance scaling broken at " + e.address);
    }
  }
}

void check_graphdir_mass_conservation() {
  auto g = graphdir::seed_graph(0.5);
  for (int n = 0; n <= 12; ++n) {
    Rational total(0);
    for (const auto& e : g.edges) total += e.mass;
    expect(total == Rational(1), "mass sum != 1 at generation " + std::to_string(n));
    if (n < 12) g = graphdir::substitute(g);
  }
}

void check_graphdir_vertex_doubling() {
  auto g = graphdir::generation(1, 0.5);
  for (int n = 1; n <= 11; ++n) {
    const auto h = graphdir::substitute(g);
    expect(h.vertex_count == 2 * g.vertex_count,
           "vertex count must double at generation " + std::to_string(n + 1));
    g = std::move(h);
  }
}

// -------------------------------------------------------------- numerics ----

std::vector<numerics::SymMatrix> probe_matrices() {
  std::vector<numerics::SymMatrix> ms;
  const auto f = Filtration::build(3);
  ms.push_back(decimation::walk_matrix(f, 3, {0.25, 0.25}).sym);
  ms.push_back(forms::resistance_laplacian(forms::make_network(f, forms::Scheme::dyadic(), 3)));
  Rng rng(2024);
  numerics::SymMatrix r(40);
  for (int i = 0; i < 40; ++i)
    for (int j = i; j < 40; ++j) r.set(i, j, rng.uniform() - 0.5);
  ms.push_back(std::move(r));
  return ms;
}

void check_numerics_orthonormality() {
  for (const auto& m : probe_matrices()) {
    const auto dec = numerics::sym_eig(m);
    const int n = m.order();
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += dec.vector_at(a, i) * dec.vector_at(b, i);
        worst = std::max(worst, std::fabs(dot - (a == b ? 1.0 : 0.0)));
      }
    expect(worst <= 1e-10 * n, "eigenvector orthonormality " + std::to_string(worst));
  }
}

void check_numerics_trace_preservation() {
  for (const auto& m : probe_matrices()) {
    const auto dec = numerics::sym_eig(m);
    double sum = 0.0;
    for (double v : dec.values) sum += v;
    const double tol = 1e-9 * m.order() * std::max(m.inf_norm(), 1.0);
    expect(std::fabs(sum - m.trace()) <= tol, "eigenvalue sum vs trace");
  }
}

void check_numerics_schur_transitivity() {
  const auto f = Filtration::build(4);
  for (const auto& scheme : {forms::Scheme::dyadic(), forms::Scheme::conformal(0.5)}) {
    const auto l4 = forms::resistance_laplacian(forms::make_network(f, scheme, 4));
    auto keep_of = [&](int lvl) {
      std::vector<int> k(f.vertex_count(lvl));
      for (size_t i = 0; i < k.size(); ++i) k[i] = static_cast<int>(i);
      return k;
    };
    const auto via3 =
        numerics::schur_complement(numerics::schur_complement(l4, keep_of(3)), keep_of(2));
    const auto direct = numerics::schur_complement(l4, keep_of(2));
    expect(max_entry_diff(via3, direct) < 1e-9, "schur transitivity " + scheme.name());
  }
}

// ----------------------------------------------------------------- forms ----

void check_forms_metric_comparison() {
  const auto f = Filtration::build(6);
  Rng rng(7);
  for (const auto& scheme : {forms::Scheme::dyadic(), forms::Scheme::conformal(0.5)}) {
    const auto net = forms::make_network(f, scheme, 6);
    const forms::ResistanceOracle res(net);
    const int n = net.vertex_count;
    for (int t = 0; t < 200; ++t) {
      const int x = static_cast<int>(rng.below(n));
      int y = static_cast<int>(rng.below(n));
      if (y == x) y = (y + 1) % n;
      const double s = forms::local_metric(net, x, y);
      const double r = res(x, y);
      expect(0.5 * s <= r + 1e-9 && r <= s + 1e-9,
             "metric comparison failed for pair (" + std::to_string(x) + "," +
                 std::to_string(y) + ") under " + scheme.name());
    }
  }
}

void check_forms_resistance_trace_consistency() {
  const auto f = Filtration::build(4);
  const auto scheme = forms::Scheme::dyadic();
  const auto net2 = forms::make_network(f, scheme, 2);
  const auto net3 = forms::make_network(f, scheme, 3);
  const forms::ResistanceOracle r2(net2);
  const forms::ResistanceOracle r3(net3);
  const int n2 = net2.vertex_count;
  for (int x = 0; x < n2; ++x)
    for (int y = x + 1; y < n2; ++y)
      expect(std::fabs(r2(x, y) - r3(x, y)) < 1e-9, "R not level-stable for pair (" +
                                                        std::to_string(x) + "," +
                                                        std::to_string(y) + ")");
  const auto net4 = forms::make_network(f, forms::Scheme::conformal(0.5), 4);
  const auto net3c = forms::make_network(f, forms::Scheme::conformal(0.5), 3);
  const forms::ResistanceOracle r4(net4);
  const forms::ResistanceOracle r3c(net3c);
  Rng rng(11);
  for (int t = 0; t < 40; ++t) {
    const int x = static_cast<int>(rng.below(net3c.vertex_count));
    const int y = static_cast<int>(rng.below(net3c.vertex_count));
    if (x == y) continue;
    expect(std::fabs(r4(x, y) - r3c(x, y)) < 1e-9, "conformal R not level-stable");
  }
}

void check_forms_harmonic_minimality() {
  const auto f = Filtration::build(4);
  const auto scheme = forms::Scheme::conformal(0.5);
  const auto net = forms::make_network(f, scheme, 4);
  Rng rng(13);
  std::vector<double> boundary(f.vertex_count(1));
  for (auto& b : boundary) b = rng.uniform() * 2.0 - 1.0;
  const auto h = forms::harmonic_extension(f, scheme, boundary, 1, 4);
  const double eh = forms::energy(net, h);
  for (int t = 0; t < 50; ++t) {
    auto g = h;
    for (size_t i = boundary.size(); i < g.size(); ++i) g[i] += (rng.uniform() - 0.5) * 0.3;
    expect(eh <= forms::energy(net, g) + 1e-12, "harmonic extension is not energy minimal");
  }
}

void check_forms_gauss_green() {
  const auto f = Filtration::build(4);
  for (const auto& scheme : {forms::Scheme::dyadic(), forms::Scheme::conformal(0.5)}) {
    const auto net = forms::make_network(f, scheme, 4);
    Rng rng(17);
    const std::vector<double> boundary = {rng.uniform(), rng.uniform() + 1.0};
    const auto h = forms::harmonic_extension(f, scheme, boundary, 0, 4);
    std::vector<double> g(net.vertex_count);
    for (auto& v : g) v = rng.uniform() * 2.0 - 1.0;
    const double lhs = forms::energy_bilinear(net, h, g);
    const double rhs = g[0] * forms::normal_derivative(net, h, 0) +
                       g[1] * forms::normal_derivative(net, h, 1);
    expect(std::fabs(lhs - rhs) < 1e-9, "Gauss-Green residual " + std::to_string(lhs - rhs) +
                                            " under " + scheme.name());
  }
}

void check_forms_nu_geodesic_additivity() {
  const auto f = Filtration::build(5);
  const auto scheme = forms::Scheme::conformal(0.5);
  const auto net = forms::make_network(f, scheme, 5);
  Rng rng(19);
  for (int t = 0; t < 60; ++t) {
    const int x = static_cast<int>(rng.below(net.vertex_count));
    const int y = static_cast<int>(rng.below(net.vertex_count));
    if (x == y) continue;
    const double s = forms::local_metric(net, x, y);
    double nu_len = 0.0;
    for (int e : forms::local_geodesic(net, x, y)) {
      expect(e >= 0, "geodesic reconstruction failed");
      nu_len += forms::local_resistance_spine(net.edges[e].address, scheme);
    }
    expect(std::fabs(nu_len - s) < 1e-9, "geodesic spine length != S(x,y)");
  }
}

// ------------------------------------------------------------ decimation ----

void check_decimation_oracle_equivalence() {
  const auto f = Filtration::build(5);
  const decimation::DecimationParams prm{0.25, 0.25};
  for (int n = 1; n <= 5; ++n) {
    const auto spec = decimation::graph_spectrum(n, prm);
    std::vector<double> formula;
    for (const auto& a : spec.atoms)
      for (long long i = 0; i < a.mult; ++i) formula.push_back(a.z);
    std::sort(formula.begin(), formula.end());
    const auto wm = decimation::walk_matrix(f, n, prm);
    const auto dec = numerics::sym_eig(wm.sym);
    expect(formula.size() == dec.values.size(), "multiplicity total mismatch");
    double worst = 0.0;
    for (size_t i = 0; i < formula.size(); ++i)
      worst = std::max(worst, std::fabs(formula[i] - dec.values[i]));
    expect(worst < 1e-8, "decimation vs eigensolver differ by " + std::to_string(worst) +
                             " at level " + std::to_string(n));
  }
}

void check_decimation_multiplicity_conservation() {
  const decimation::DecimationParams grid[] = {{0.25, 0.25}, {0.3, 0.6}, {0.45, 0.9}};
  for (const auto& prm : grid)
    for (int n = 0; n <= 6; ++n) {
      const auto spec = decimation::graph_spectrum(n, prm);
      expect(spec.pruned.empty(), "unexpected pruned branches");
      expect(spec.total_multiplicity() == 2 * pow3(n), "total multiplicity != 2*3^n");
    }
}

void check_decimation_spectral_similarity() {
  const auto f = Filtration::build(4);
  const decimation::DecimationParams prm{0.25, 0.25};
  Rng rng(23);
  for (int n = 1; n <= 4; ++n) {
    const auto wn = decimation::walk_matrix(f, n, prm);
    const auto wp = decimation::walk_matrix(f, n - 1, prm);
    const int old = wn.old_count;
    const int fresh = wn.size - old;
    for (int t = 0; t < 20; ++t) {
      double z = rng.uniform() * 3.0 - 0.75;
      if (std::fabs(z - 2.0 * prm.p) < 0.05) z += 0.1;
      const double phi = prm.p / (2.0 * prm.p - z);
      const double r = decimation::rmap(z, prm.p);
      double worst = 0.0;
      for (int i = 0; i < old; ++i)
        for (int j = 0; j < old; ++j) {
          double s = (i == j) ? wn.raw_at(i, j) - z : wn.raw_at(i, j);
          for (int k = 0; k < fresh; ++k)
            s -= wn.raw_at(i, old + k) * wn.raw_at(old + k, j) / (2.0 * prm.p - z);
          const double want = phi * (wp.raw_at(i, j) - (i == j ? r : 0.0));
          worst = std::max(worst, std::fabs(s - want));
        }
      expect(worst < 1e-8, "spectral similarity identity off by " + std::to_string(worst));
    }
  }
}

void check_decimation_eigenspace_map_rank() {
  const auto f = Filtration::build(3);
  const decimation::DecimationParams prm{0.25, 0.25};
  for (int n = 2; n <= 3; ++n) {
    const auto spec = decimation::graph_spectrum(n, prm);
    for (const auto& atom : spec.atoms) {
      const auto basis = decimation::eigenfunction_basis(f, atom, n, prm);
      expect(static_cast<long long>(basis.size()) == atom.mult,
             "basis size mismatch for z=" + std::to_string(atom.z));
      // Gram matrix must be far from singular: the extension map is injective.
      const int k = static_cast<int>(basis.size());
      numerics::SymMatrix gram(k);
      for (int a = 0; a < k; ++a)
        for (int b = a; b < k; ++b) {
          double dot = 0.0;
          for (size_t i = 0; i < basis[a].size(); ++i) dot += basis[a][i] * basis[b][i];
          gram.set(a, b, dot);
        }
      const auto dec = numerics::sym_eig(gram);
      expect(dec.values.front() > 1e-10, "extended eigenvectors nearly dependent at z=" +
                                             std::to_string(atom.z));
    }
  }
}

void check_decimation_eigenfunction_scaling() {
  // A born eigenfunction restricted to one cell and re-indexed through the
  // address isomorphism solves the same eigenvalue problem on the smaller
  // graph, away from the cell boundary.
  const auto f = Filtration::build(3);
  const decimation::DecimationParams prm{0.25, 0.25};
  const int n = 3;
  decimation::SpectrumAtom atom;
  atom.z = 2.0 * prm.p;
  atom.mult = 2 * pow3(n - 1);
  atom.birth = decimation::Birth::exceptional;
  atom.m = 0;
  atom.seed = atom.z;
  const auto basis = decimation::eigenfunction_basis(f, atom, n, prm);

  // Pair the subdivision of the level-2 cell 1.1 with the subdivision of the
  // level-1 cell 1; vertices map accordingly.
  const CellAddress alpha(1, {1});
  const int target_level = 2; // n - |alpha| + 1
  std::vector<int> vmap(f.vertex_count(n), -1);
  struct Pair {
    int big_edge, small_edge, big_level, small_level;
  };
  const auto& gb1 = f.graph(1);
  int big_root = -1;
  for (size_t i = 0; i < gb1.edges.size(); ++i)
    if (gb1.edges[i].address == alpha) big_root = static_cast<int>(i);
  expect(big_root >= 0, "cell 1.1 not found");
  vmap[gb1.edges[big_root].v1] = 0;
  vmap[gb1.edges[big_root].v2] = 1;
  std::vector<Pair> frontier = {{big_root, 0, 1, 0}};
  while (frontier.front().big_level < n) {
    std::vector<Pair> next;
    for (const auto& pr : frontier) {
      const auto& be = f.graph(pr.big_level).edges[pr.big_edge];
      const auto& se = f.graph(pr.small_level).edges[pr.small_edge];
      expect(vmap[be.v1] == se.v1 && vmap[be.v2] == se.v2, "pairing endpoints drifted");
      vmap[be.midpoint] = se.midpoint;
      // Children sit at positions 3*edge + {0,1,2} in the next level.
      for (int c = 0; c < 3; ++c)
        next.push_back(
            {3 * pr.big_edge + c, 3 * pr.small_edge + c, pr.big_level + 1, pr.small_level + 1});
    }
    frontier = std::move(next);
  }

  const auto wm_small = decimation::walk_matrix(f, target_level, prm);
  for (const auto& v : basis) {
    std::vector<double> u(f.vertex_count(target_level), 0.0);
    for (int big = 0; big < f.vertex_count(n); ++big)
      if (vmap[big] >= 0) u[vmap[big]] = v[big];
    // Eigen-equation at image vertices away from the cell boundary {0, 1}.
    for (int x = 2; x < wm_small.size; ++x) {
      bool in_image = false;
      for (int big = 0; big < f.vertex_count(n); ++big)
        if (vmap[big] == x) in_image = true;
      if (!in_image) continue;
      double s = 0.0;
      for (int j = 0; j < wm_small.size; ++j) s += wm_small.raw_at(x, j) * u[j];
      expect(std::fabs(s - atom.z * u[x]) < 1e-8, "cell-restricted eigenfunction residual");
    }
  }
}

// --------------------------------------------------------------- spectra ----

void check_spectra_psi_functional_equation() {
  for (int i = 0; i < 20; ++i) {
    const double x = 1.5 * (i + 0.5) / 20.0;
    const double lhs = spectra::linearizer(spectra::psi(x));
    const double rhs = spectra::linearizer(x) / 6.0;
    expect(std::fabs(lhs - rhs) < 1e-10, "linearizer functional equation off at x=" +
                                             std::to_string(x));
  }
}

void check_spectra_dirichlet_graph_consistency() {
  const auto f = Filtration::build(3);
  const decimation::DecimationParams prm{0.25, 0.25};
  for (const auto& atom : spectra::dirichlet_spectrum(3)) {
    decimation::SpectrumAtom ga;
    ga.z = atom.seed_value;
    ga.mult = atom.mult;
    ga.birth = decimation::Birth::exceptional;
    ga.m = atom.m;
    ga.lineage = atom.branch;
    ga.seed = 0.5;
    const auto basis = decimation::eigenfunction_basis(f, ga, atom.n0, prm);
    for (const auto& v : basis)
      expect(std::fabs(v[0]) < 1e-10 && std::fabs(v[1]) < 1e-10,
             "Dirichlet eigenfunction does not vanish on the boundary");
    // Tail of the lineage is the contracting branch: the renormalized
    // iteration -8 * 6^k * psi^(k-n0)(seed) must reproduce lambda.
    double z = atom.seed_value;
    double scale = std::pow(6.0, atom.n0);
    double est = -8.0 * scale * z;
    for (int j = 0; j < 40; ++j) {
      z = spectra::psi(z);
      scale *= 6.0;
      est = -8.0 * scale * z;
    }
    expect(std::fabs(est - atom.lambda) < 1e-9 * std::max(1.0, std::fabs(atom.lambda)),
           "direct renormalized iteration disagrees with the linearizer");
  }
}

void check_spectra_mass_lumping() {
  for (int n = 0; n <= 10; ++n) {
    const auto g = graphdir::generation(n, 0.5);
    Rational total(0);
    for (const auto& m : graphdir::lumped_masses(g)) total += m;
    expect(total == Rational(1), "lumped masses sum != 1 at generation " + std::to_string(n));
  }
}

void check_spectra_renormalization_constant() {
  const auto f = Filtration::build(4);
  const decimation::DecimationParams simple{0.25, 0.5};
  for (int n = 0; n <= 4; ++n) {
    const auto l = forms::resistance_laplacian(forms::make_network(f, forms::Scheme::dyadic(), n));
    const auto wm = decimation::walk_matrix(f, n, simple);
    // Edge resistances at level n are 2^-(n+1), so the constant is 4 * 2^(n+1).
    const double c = std::ldexp(4.0, n + 1);
    for (int i = 0; i < l.order(); ++i)
      for (int j = 0; j < l.order(); ++j)
        expect(l(i, j) == c * wm.raw_at(i, j),
               "dyadic Laplacian != renormalized walk at level " + std::to_string(n));
  }
}

// -------------------------------------------------------------- geometry ----

void check_geometry_dynamical_consistency() {
  const auto [a, b] = geometry::fixed_points();
  (void)b;
  for (int n = 1; n <= 10; ++n) {
    auto cur = geometry::backward_orbit(n);
    auto prev = geometry::backward_orbit(n - 1);
    std::sort(prev.begin(), prev.end(), [](auto u, auto v) {
      return u.real() != v.real() ? u.real() < v.real() : u.imag() < v.imag();
    });
    for (const auto& z : cur) {
      const auto img = geometry::apply_map(z);
      double best = 1e9;
      for (const auto& w : prev) best = std::min(best, std::abs(img - w));
      expect(best < 1e-12, "orbit point does not map into the previous orbit");
    }
  }
  for (const auto& z : geometry::backward_orbit(10)) {
    geometry::Complex w = z;
    for (int k = 0; k < 10; ++k) w = geometry::apply_map(w);
    expect(std::abs(w - geometry::Complex(a, 0)) < 1e-9, "forward iteration misses the base point");
  }
}

void check_geometry_counting_oracle() {
  const auto [a, b] = geometry::fixed_points();
  (void)b;
  const auto pts = geometry::backward_orbit(14);
  long long left = 0;
  for (const auto& z : pts) left += (z.real() < a);
  const double frac = static_cast<double>(left) / static_cast<double>(pts.size());
  expect(std::fabs(frac - 1.0 / 3.0) <= 0.02 / 3.0,
         "left-piece point fraction " + std::to_string(frac) + " not within 2% of 1/3");
}

void check_geometry_symmetry() {
  for (int n = 1; n <= 10; ++n) {
    auto pts = geometry::backward_orbit(n);
    auto sorted = pts;
    auto cmp = [](const geometry::Complex& u, const geometry::Complex& v) {
      return u.real() != v.real() ? u.real() < v.real() : u.imag() < v.imag();
    };
    std::sort(sorted.begin(), sorted.end(), cmp);
    auto contains = [&](geometry::Complex w) {
      for (const auto& s : sorted)
        if (std::abs(s - w) < 1e-9) return true;
      return false;
    };
    for (const auto& z : pts) {
      expect(contains(-z), "orbit not symmetric under negation");
      expect(contains(std::conj(z)), "orbit not symmetric under conjugation");
    }
  }
}

} // namespace

const std::vector<Check>& registry() {
  static const std::vector<Check> checks = {
      {"cells", "counts", check_cells_counts},
      {"cells", "degree-regularity", check_cells_degree_regularity},
      {"cells", "m-exponent-split", check_cells_m_exponent_split},
      {"cells", "dynamics-kind", check_cells_dynamics_kind},
      {"cells", "vertex-id-stability", check_cells_vertex_id_stability},
      {"graphdir", "trace-compatibility", check_graphdir_trace_compatibility},
      {"graphdir", "resistance-scaling", check_graphdir_resistance_scaling},
      {"graphdir", "mass-conservation", check_graphdir_mass_conservation},
      {"graphdir", "vertex-doubling", check_graphdir_vertex_doubling},
      {"numerics", "orthonormality", check_numerics_orthonormality},
      {"numerics", "trace-preservation", check_numerics_trace_preservation},
      {"numerics", "schur-transitivity", check_numerics_schur_transitivity},
      {"forms", "metric-comparison", check_forms_metric_comparison},
      {"forms", "resistance-trace-consistency", check_forms_resistance_trace_consistency},
      {"forms", "harmonic-minimality", check_forms_harmonic_minimality},
      {"forms", "gauss-green", check_forms_gauss_green},
      {"forms", "nu-geodesic-additivity", check_forms_nu_geodesic_additivity},
      {"decimation", "oracle-equivalence", check_decimation_oracle_equivalence},
      {"decimation", "multiplicity-conservation", check_decimation_multiplicity_conservation},
      {"decimation", "spectral-similarity", check_decimation_spectral_similarity},
      {"decimation", "eigenspace-map-rank", check_decimation_eigenspace_map_rank},
      {"decimation", "eigenfunction-scaling", check_decimation_eigenfunction_scaling},
      {"spectra", "psi-functional-equation", check_spectra_psi_functional_equation},
      {"spectra", "dirichlet-graph-consistency", check_spectra_dirichlet_graph_consistency},
      {"spectra", "mass-lumping", check_spectra_mass_lumping},
      {"spectra", "renormalization-constant", check_spectra_renormalization_constant},
      {"geometry", "dynamical-consistency", check_geometry_dynamical_consistency},
      {"geometry", "counting-oracle", check_geometry_counting_oracle},
      {"geometry", "symmetry", check_geometry_symmetry},
  };
  return checks;
}

std::vector<Outcome> run_all(int workers) {
  const auto& checks = registry();
  std::vector<Outcome> results(checks.size());
  std::atomic<size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const size_t i = cursor.fetch_add(1);
      if (i >= checks.size()) return;
      Outcome& out = results[i];
      out.module = checks[i].module;
      out.name = checks[i].name;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        checks[i].run();
        out.passed = true;
      } catch (const std::exception& e) {
        out.passed = false;
        out.detail = e.what();
      }
      out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const int nthreads = std::max(1, std::min<int>(workers, static_cast<int>(checks.size())));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return results;
}

} // namespace basilica::invariants
