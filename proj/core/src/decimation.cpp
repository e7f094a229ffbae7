#include "basilica/decimation.hpp"

#include <algorithm>
#include <cmath>

namespace basilica::decimation {

using cells::CellKind;

void DecimationParams::check() const {
  if (!(p > 0.0 && p < 0.5)) throw ValidationError("decimation parameter p must lie in (0, 1/2)");
  if (!(q > 0.0 && q < 1.0)) throw ValidationError("decimation parameter q must lie in (0, 1)");
}

double rmap(double z, double p) { return ((2.0 * p + 1.0) / p) * z - z * z / p; }

std::pair<double, double> preimages(double w, double p) {
  const double b = 2.0 * p + 1.0;
  const double disc = b * b - 4.0 * p * w;
  if (disc < 0.0)
    throw ValidationError("no real preimage: discriminant " + std::to_string(disc) +
                          " negative for w=" + std::to_string(w));
  const double s = std::sqrt(disc);
  return {(b - s) / 2.0, (b + s) / 2.0};
}

long long GraphSpectrum::total_multiplicity() const {
  long long t = 0;
  for (const auto& a : atoms) t += a.mult;
  return t;
}

namespace {

long long pow3(int k) {
  long long v = 1;
  while (k-- > 0) v *= 3;
  return v;
}

/// Expands all branch words of the given length from a seed value, in
/// lexicographic order with '-' before '+'. Branches with negative
/// discriminant are recorded in `pruned` and skipped.
void expand_branches(double seed, int length, double p, const char* tag,
                     std::vector<std::pair<double, std::string>>& out,
                     std::vector<std::string>* pruned) {
  struct Item {
    double z;
    std::string word;
  };
  std::vector<Item> frontier = {{seed, ""}};
  for (int step = 0; step < length; ++step) {
    std::vector<Item> next;
    next.reserve(frontier.size() * 2);
    for (const auto& it : frontier) {
      try {
        const auto [lo, hi] = preimages(it.z, p);
        next.push_back({lo, it.word + "-"});
        next.push_back({hi, it.word + "+"});
      } catch (const ValidationError&) {
        if (pruned)
          pruned->push_back(std::string(tag) + " branch " + (it.word.empty() ? "(root)" : it.word) +
                            " pruned: no real preimage of " + std::to_string(it.z));
      }
    }
    frontier = std::move(next);
  }
  for (const auto& it : frontier) out.push_back({it.z, it.word});
}

} // namespace

GraphSpectrum graph_spectrum(int n, const DecimationParams& prm) {
  prm.check();
  if (n < 0) throw ValidationError("graph_spectrum needs n >= 0");
  GraphSpectrum spec;
  spec.level = n;
  if (n == 0) {
    spec.atoms.push_back({0.0, 1, Birth::initial, 0, "", 0.0});
    spec.atoms.push_back({2.0 * prm.q, 1, Birth::initial, 0, "", 2.0 * prm.q});
    return spec;
  }
  for (int m = 0; m < n; ++m) {
    std::vector<std::pair<double, std::string>> pts;
    expand_branches(2.0 * prm.p, m, prm.p, "exceptional", pts, &spec.pruned);
    const long long mult = 2 * pow3(n - m - 1);
    for (const auto& [z, word] : pts)
      spec.atoms.push_back({z, mult, Birth::exceptional, m, word, 2.0 * prm.p});
  }
  for (const double seed : {0.0, 2.0 * prm.q}) {
    std::vector<std::pair<double, std::string>> pts;
    expand_branches(seed, n, prm.p, "initial", pts, &spec.pruned);
    for (const auto& [z, word] : pts)
      spec.atoms.push_back({z, 1, Birth::initial, n, word, seed});
  }
  return spec;
}

WalkMatrix walk_matrix(const cells::Filtration& f, int n, const DecimationParams& prm) {
  prm.check();
  const auto& g = f.graph(n);
  const int size = g.vertex_count;

  WalkMatrix wm;
  wm.level = n;
  wm.size = size;
  wm.old_count = (n == 0) ? 2 : f.vertex_count(n - 1);
  wm.raw.assign(static_cast<size_t>(size) * size, 0.0);
  wm.vertex_weight.assign(size, 1.0);

  // Edge/loop conductances per level, aligned with the filtration edge order.
  // Level 0 seeds the two arcs at q/2 and the two loops at 1-q; an arc child
  // inherits its parent's conductance (half of it for loop parents) and each
  // new midpoint gets vertex weight kappa/p and a loop making its exit
  // probability p per arc.
  std::vector<double> kappa = {prm.q / 2.0, prm.q / 2.0, 1.0 - prm.q, 1.0 - prm.q};
  std::vector<double> weight = {1.0, 1.0};
  for (int k = 0; k < n; ++k) {
    const auto& gk = f.graph(k);
    std::vector<double> next;
    next.reserve(kappa.size() * 3);
    for (size_t i = 0; i < gk.edges.size(); ++i) {
      const double kc =
          (gk.edges[i].kind == CellKind::arc) ? kappa[i] : kappa[i] / 2.0;
      next.push_back(kc);
      next.push_back(kc);
      next.push_back(kc * (1.0 - 2.0 * prm.p) / prm.p);
      weight.push_back(kc / prm.p);
    }
    kappa = std::move(next);
  }
  wm.vertex_weight = weight;

  auto raw = [&](int i, int j) -> double& { return wm.raw[static_cast<size_t>(i) * size + j]; };
  std::vector<double> loop_at(size, 0.0);
  for (size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (e.kind == CellKind::loop) {
      loop_at[e.v1] += kappa[i];
    } else {
      raw(e.v1, e.v2) -= kappa[i] / weight[e.v1];
      raw(e.v2, e.v1) -= kappa[i] / weight[e.v2];
    }
  }
  for (int x = 0; x < size; ++x) raw(x, x) = 1.0 - loop_at[x] / weight[x];

  wm.sym = numerics::SymMatrix(size);
  for (int x = 0; x < size; ++x) wm.sym.set(x, x, raw(x, x));
  for (size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (e.kind == CellKind::loop) continue;
    wm.sym.add(e.v1, e.v2, -kappa[i] / std::sqrt(weight[e.v1] * weight[e.v2]));
  }
  return wm;
}

double WalkMatrix::residual(const std::vector<double>& v, double z) const {
  double r2 = 0.0;
  for (int i = 0; i < size; ++i) {
    double s = 0.0;
    for (int j = 0; j < size; ++j) s += raw_at(i, j) * v[j];
    s -= z * v[i];
    r2 += s * s;
  }
  return std::sqrt(r2);
}

namespace {

/// Extends values on the level-k vertex set to level k+1 for eigenvalue z:
/// each new midpoint takes p * (sum of its two endpoint values) / (2p - z).
std::vector<double> extend_once(const cells::Filtration& f, int k,
                                const std::vector<double>& vals, double z, double p) {
  if (std::fabs(2.0 * p - z) < 1e-14)
    throw ValidationError("eigenfunction propagation hit the exceptional value 2p");
  const auto& g = f.graph(k);
  std::vector<double> out = vals;
  out.resize(f.vertex_count(k + 1), 0.0);
  for (const auto& e : g.edges) {
    out[e.midpoint] = p * (vals[e.v1] + vals[e.v2]) / (2.0 * p - z);
  }
  return out;
}

std::vector<double> lineage_values(const SpectrumAtom& atom, const DecimationParams& prm) {
  std::vector<double> zs = {atom.seed};
  double z = atom.seed;
  for (char c : atom.lineage) {
    const auto [lo, hi] = preimages(z, prm.p);
    z = (c == '-') ? lo : hi;
    zs.push_back(z);
  }
  return zs;
}

} // namespace

std::vector<std::vector<double>> eigenfunction_basis(const cells::Filtration& f,
                                                     const SpectrumAtom& atom, int n,
                                                     const DecimationParams& prm) {
  prm.check();
  if (static_cast<int>(atom.lineage.size()) != atom.m)
    throw ValidationError("atom lineage length disagrees with its branch count");
  const auto zs = lineage_values(atom, prm);
  if (std::fabs(zs.back() - atom.z) > 1e-9)
    throw ValidationError("atom value disagrees with its lineage");

  std::vector<std::vector<double>> basis;
  int born_level = 0;

  if (atom.birth == Birth::initial) {
    if (atom.m != n) throw ValidationError("initial atom must carry one branch per level");
    std::vector<double> v0(2);
    if (atom.seed == 0.0) {
      v0 = {1.0, 1.0};
    } else {
      v0 = {1.0, -1.0};
    }
    basis.push_back(v0);
    born_level = 0;
  } else {
    born_level = n - atom.m;
    if (born_level < 1) throw ValidationError("exceptional atom branch count too large for level");
    const auto wm = walk_matrix(f, born_level, prm);
    const int old = wm.old_count;
    const int fresh = wm.size - old;
    // Born eigenspace: functions vanishing on the previous vertex set whose
    // old rows annihilate them, i.e. the null space of the old-fresh block.
    numerics::SymMatrix btb(fresh);
    for (int i = 0; i < fresh; ++i)
      for (int j = i; j < fresh; ++j) {
        double s = 0.0;
        for (int x = 0; x < old; ++x) s += wm.raw_at(x, old + i) * wm.raw_at(x, old + j);
        btb.set(i, j, s);
      }
    const auto dec = numerics::sym_eig(btb);
    const double thresh = 1e-8 * std::max(1.0, btb.inf_norm());
    const long long expected = 2 * [&] {
      long long v = 1;
      for (int i = 0; i < born_level - 1; ++i) v *= 3;
      return v;
    }();
    int null_dim = 0;
    while (null_dim < fresh && dec.values[null_dim] < thresh) ++null_dim;
    if (null_dim != expected)
      throw InvariantError("born eigenspace dimension " + std::to_string(null_dim) +
                           " != expected " + std::to_string(expected));
    for (int k = 0; k < null_dim; ++k) {
      std::vector<double> v(wm.size, 0.0);
      for (int i = 0; i < fresh; ++i) v[old + i] = dec.vector_at(k, i);
      basis.push_back(std::move(v));
    }
  }

  // Propagate down the lineage: the value chain zs[j] applies when extending
  // to born_level + j.
  for (int j = 1; j <= atom.m; ++j) {
    const int target = born_level + j;
    for (auto& v : basis) v = extend_once(f, target - 1, v, zs[j], prm.p);
  }

  const auto wm_n = walk_matrix(f, n, prm);
  for (const auto& v : basis) {
    const double r = wm_n.residual(v, atom.z);
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(std::max(norm, 1e-300));
    if (r / norm > 1e-8)
      throw InvariantError("eigenfunction residual " + std::to_string(r / norm) +
                           " exceeds 1e-8 for z=" + std::to_string(atom.z));
  }
  return basis;
}

std::vector<IdsAtom> ids(int max_m, const DecimationParams& prm) {
  prm.check();
  if (max_m < 0) throw ValidationError("ids needs max_m >= 0");
  std::vector<IdsAtom> atoms;
  for (int m = 0; m <= max_m; ++m) {
    std::vector<std::pair<double, std::string>> pts;
    expand_branches(2.0 * prm.p, m, prm.p, "ids", pts, nullptr);
    for (const auto& [z, word] : pts) atoms.push_back({z, m, word, Rational(2, pow3(m + 1))});
  }
  return atoms;
}

} // namespace basilica::decimation
