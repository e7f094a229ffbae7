#pragma once

#include "basilica/numerics.hpp"
#include "basilica/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace basilica::graphdir {

/// Edge of the two-symbol substitution sequence. A-edges carry the
/// generation-determined resistance r1 * sqrt(2)^(1-g); relabeling A -> B
/// keeps the resistance (it is the same piece of the fractal); loops carry
/// no resistance at all. Masses are exact and total 1 in every generation.
struct LabeledEdge {
  int u = 0;
  int v = 0;
  char label = 'A'; // 'A' or 'B'
  bool loop = false;
  int generation = 0; // generation at which the underlying piece appeared
  Rational mass;
  std::optional<double> resistance; // empty for loops
  std::string address;              // cell address; "R" for the seed right piece
};

struct LabeledGraph {
  int generation = 0;
  int vertex_count = 0;
  double r1 = 0.5;
  std::vector<LabeledEdge> edges;

  int count_label(char label) const;
};

/// Generation 0: one vertex, an A-loop of mass 1/3 (left piece) and a
/// B-loop of mass 2/3 (right piece).
LabeledGraph seed_graph(double r1 = 0.5);

/// One substitution step: A{u,v} relabels to B{u,v}; B{u,v} of mass M grows
/// a fresh vertex w, two A-edges {u,w},{w,v} of mass M/4 each, and a B-loop
/// at w of mass M/2.
LabeledGraph substitute(const LabeledGraph& g);
/// Convenience: the generation-n graph.
LabeledGraph generation(int n, double r1 = 0.5);

inline constexpr int kMaxGeneration = 16;

/// Edge-count transfer matrix [[0,2],[1,1]], its exact spectral radius 2,
/// and the exponents it forces: s with (2 sqrt 2)^-s * rho = 1.
struct CountingMatrix {
  int m[2][2] = {{0, 2}, {1, 1}};
  double spectral_radius = 2.0;
  Rational s{2, 3};
  Rational ds{4, 3};
};

CountingMatrix counting_matrix();

/// Predicted (a_n, b_n) edge counts from the counting matrix recursion.
std::pair<long long, long long> predicted_counts(int n);

/// Conductance Laplacian of the non-loop edges (1/resistance per edge).
numerics::SymMatrix resistance_laplacian(const LabeledGraph& g);

/// Lumped vertex masses: half of each incident arc mass plus full loop
/// masses; they sum to exactly 1.
std::vector<Rational> lumped_masses(const LabeledGraph& g);

} // namespace basilica::graphdir
