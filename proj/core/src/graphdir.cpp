#include "basilica/graphdir.hpp"

#include <array>
#include <cmath>

namespace basilica::graphdir {

int LabeledGraph::count_label(char label) const {
  int c = 0;
  for (const auto& e : edges) c += (e.label == label);
  return c;
}

LabeledGraph seed_graph(double r1) {
  if (!(r1 > 0.0)) throw ValidationError("seed_graph needs r1 > 0");
  LabeledGraph g;
  g.generation = 0;
  g.vertex_count = 1;
  g.r1 = r1;
  g.edges.push_back({0, 0, 'A', true, 0, Rational(1, 3), std::nullopt, "3"});
  g.edges.push_back({0, 0, 'B', true, 0, Rational(2, 3), std::nullopt, "R"});
  return g;
}

namespace {

double a_resistance(double r1, int gen) {
  return r1 * std::pow(std::sqrt(2.0), 1.0 - gen);
}

/// Child addresses under substitution. Generic B-cell alpha spawns alpha.1,
/// alpha.2 (arcs) and alpha.3 (loop); the seed right piece "R" spawns the
/// two central arcs "1","2" and the right arm "4".
std::array<std::string, 3> child_addresses(const std::string& addr) {
  if (addr == "R") return {"1", "2", "4"};
  return {addr + ".1", addr + ".2", addr + ".3"};
}

} // namespace

LabeledGraph substitute(const LabeledGraph& g) {
  if (g.generation >= kMaxGeneration)
    throw CapacityError("substitution beyond generation " + std::to_string(kMaxGeneration));
  LabeledGraph out;
  out.generation = g.generation + 1;
  out.vertex_count = g.vertex_count;
  out.r1 = g.r1;
  const int gen = out.generation;
  const double ra = a_resistance(g.r1, gen);
  for (const auto& e : g.edges) {
    if (e.label == 'A') {
      LabeledEdge b = e;
      b.label = 'B';
      out.edges.push_back(std::move(b));
      continue;
    }
    const int w = out.vertex_count++;
    const auto kids = child_addresses(e.address);
    out.edges.push_back({e.u, w, 'A', false, gen, e.mass * Rational(1, 4), ra, kids[0]});
    out.edges.push_back({w, e.v, 'A', false, gen, e.mass * Rational(1, 4), ra, kids[1]});
    out.edges.push_back({w, w, 'B', true, gen, e.mass * Rational(1, 2), std::nullopt, kids[2]});
  }
  return out;
}

LabeledGraph generation(int n, double r1) {
  if (n < 0) throw ValidationError("generation needs n >= 0");
  if (n > kMaxGeneration)
    throw CapacityError("generation " + std::to_string(n) + " exceeds budget " +
                        std::to_string(kMaxGeneration));
  LabeledGraph g = seed_graph(r1);
  for (int i = 0; i < n; ++i) g = substitute(g);
  return g;
}

CountingMatrix counting_matrix() { return CountingMatrix{}; }

std::pair<long long, long long> predicted_counts(int n) {
  long long a = 1, b = 1;
  for (int i = 0; i < n; ++i) {
    const long long a2 = 2 * b;
    const long long b2 = a + b;
    a = a2;
    b = b2;
  }
  return {a, b};
}

numerics::SymMatrix resistance_laplacian(const LabeledGraph& g) {
  numerics::SymMatrix l(g.vertex_count);
  for (const auto& e : g.edges) {
    if (e.loop) continue;
    if (!e.resistance)
      throw InvariantError("non-loop edge without resistance at " + e.address);
    const double c = 1.0 / *e.resistance;
    l.add(e.u, e.u, c);
    l.add(e.v, e.v, c);
    l.add(e.u, e.v, -c);
  }
  return l;
}

std::vector<Rational> lumped_masses(const LabeledGraph& g) {
  std::vector<Rational> m(g.vertex_count, Rational(0));
  for (const auto& e : g.edges) {
    if (e.loop) {
      m[e.u] += e.mass;
    } else {
      m[e.u] += e.mass * Rational(1, 2);
      m[e.v] += e.mass * Rational(1, 2);
    }
  }
  return m;
}

} // namespace basilica::graphdir
