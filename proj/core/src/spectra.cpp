#include "basilica/spectra.hpp"

#include <algorithm>
#include <cmath>

namespace basilica::spectra {

double psi(double x) {
  const double disc = 9.0 - 4.0 * x;
  if (disc < 0.0)
    throw ValidationError("psi undefined for x > 9/4, got " + std::to_string(x));
  return (3.0 - std::sqrt(disc)) / 4.0;
}

double linearizer(double x, double tol) {
  if (!(tol > 0.0)) throw ValidationError("linearizer needs tol > 0");
  if (x < 0.0 || x > 2.25)
    throw ValidationError("linearizer domain is [0, 9/4], got " + std::to_string(x));
  double value = x;
  double scale = 1.0;
  double est = value;
  for (int k = 0; k < 60; ++k) {
    value = psi(value);
    scale *= 6.0;
    const double next = scale * value;
    if (std::fabs(next - est) < tol * std::max(1.0, std::fabs(est))) return next;
    est = next;
  }
  return est;
}

namespace {

long long pow3(int k) {
  long long v = 1;
  while (k-- > 0) v *= 3;
  return v;
}

double pow6(int k) {
  double v = 1.0;
  while (k-- > 0) v *= 6.0;
  return v;
}

std::vector<std::pair<double, std::string>> branch_values(double seed, int length) {
  std::vector<std::pair<double, std::string>> frontier = {{seed, ""}};
  for (int step = 0; step < length; ++step) {
    std::vector<std::pair<double, std::string>> next;
    next.reserve(frontier.size() * 2);
    for (const auto& [z, word] : frontier) {
      const auto [lo, hi] = decimation::preimages(z, 0.25);
      next.push_back({lo, word + "-"});
      next.push_back({hi, word + "+"});
    }
    frontier = std::move(next);
  }
  return frontier;
}

void sort_by_abs_lambda(std::vector<FractalAtom>& atoms) {
  std::stable_sort(atoms.begin(), atoms.end(), [](const FractalAtom& a, const FractalAtom& b) {
    return std::fabs(a.lambda) < std::fabs(b.lambda);
  });
}

} // namespace

std::vector<FractalAtom> dirichlet_spectrum(int max_n0) {
  if (max_n0 < 1) throw ValidationError("dirichlet_spectrum needs max_n0 >= 1");
  std::vector<FractalAtom> atoms;
  for (int n0 = 1; n0 <= max_n0; ++n0) {
    for (int m = 0; m < n0; ++m) {
      for (const auto& [w, word] : branch_values(0.5, m)) {
        FractalAtom a;
        a.lambda = -8.0 * pow6(n0) * linearizer(w);
        a.mult = 2 * pow3(n0 - m - 1);
        a.n0 = n0;
        a.m = m;
        a.branch = word;
        a.kind = FractalAtom::Kind::dirichlet;
        a.seed_value = w;
        atoms.push_back(std::move(a));
      }
    }
  }
  sort_by_abs_lambda(atoms);
  return atoms;
}

std::vector<FractalAtom> neumann_candidates(int max_n0, double q) {
  if (max_n0 < 1) throw ValidationError("neumann_candidates needs max_n0 >= 1");
  if (!(q > 0.0 && q < 1.0)) throw ValidationError("neumann_candidates needs q in (0,1)");
  std::vector<FractalAtom> atoms;
  for (int n0 = 1; n0 <= max_n0; ++n0) {
    for (const double seed : {0.0, 2.0 * q}) {
      for (const auto& [w, word] : branch_values(seed, n0)) {
        FractalAtom a;
        a.lambda = -8.0 * pow6(n0) * linearizer(w);
        a.mult = 1;
        a.n0 = n0;
        a.m = n0;
        a.branch = word;
        a.kind = FractalAtom::Kind::neumann_candidate;
        a.seed_value = w;
        atoms.push_back(std::move(a));
      }
    }
  }
  sort_by_abs_lambda(atoms);
  return atoms;
}

WeylFit weyl_fit(const std::vector<std::pair<double, long long>>& atoms, double lo, double hi) {
  if (!(lo > 0.0) || !(hi > lo)) throw ValidationError("weyl_fit needs 0 < lo < hi");
  std::vector<std::pair<double, long long>> sorted = atoms;
  std::sort(sorted.begin(), sorted.end());
  long long count = 0;
  std::vector<double> xs, ys;
  for (const auto& [lambda, mult] : sorted) {
    count += mult;
    if (lambda < lo || lambda > hi) continue;
    xs.push_back(std::log(lambda));
    ys.push_back(std::log(static_cast<double>(count)));
  }
  if (static_cast<int>(xs.size()) < 30)
    throw ValidationError("weyl_fit needs at least 30 atoms in range, got " +
                          std::to_string(xs.size()));
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  WeylFit fit;
  fit.points = static_cast<int>(xs.size());
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

GraphDirectedSpectrum graphdirected_spectrum(int n, double r1, GdNormalization norm) {
  if (n < 1) throw ValidationError("graphdirected_spectrum needs n >= 1");
  if (n > kMaxGraphDirectedLevel)
    throw CapacityError("graphdirected_spectrum capped at generation " +
                        std::to_string(kMaxGraphDirectedLevel) + " (dense solver)");
  const auto g = graphdir::generation(n, r1);
  const auto masses = graphdir::lumped_masses(g);
  numerics::SymMatrix l(g.vertex_count);
  const double rscale =
      (norm == GdNormalization::stationary) ? std::pow(std::sqrt(2.0), n) : 1.0;
  const double mscale = (norm == GdNormalization::stationary) ? std::ldexp(1.0, n) : 1.0;
  for (const auto& e : g.edges) {
    if (e.loop) continue;
    const double c = 1.0 / (*e.resistance * rscale);
    l.add(e.u, e.u, c);
    l.add(e.v, e.v, c);
    l.add(e.u, e.v, -c);
  }
  std::vector<double> m(masses.size());
  for (size_t i = 0; i < masses.size(); ++i) m[i] = masses[i].to_double() * mscale;
  GraphDirectedSpectrum out;
  out.level = n;
  out.decomposition = numerics::gen_eig(l, m);
  out.values = out.decomposition.values;
  return out;
}

std::pair<Rational, Rational> symbolic_ds() {
  // spectral radius of [[0,2],[1,1]] is 2 = (2 sqrt 2)^(2/3) exactly:
  // both are powers of sqrt(2), with exponents 2 and 3.
  const Rational s(2, 3);
  return {s, s * Rational(2)};
}

double spectral_dimension_from(double count_growth, double time_scale) {
  if (!(count_growth > 1.0) || !(time_scale > 1.0))
    throw ValidationError("spectral_dimension_from needs growth and scale > 1");
  return 2.0 * std::log(count_growth) / std::log(time_scale);
}

} // namespace basilica::spectra
