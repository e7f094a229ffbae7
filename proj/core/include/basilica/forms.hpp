#pragma once

#include "basilica/cells.hpp"
#include "basilica/numerics.hpp"
#include "basilica/rational.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace basilica::forms {

/// Rules defining a user-supplied resistance assignment. Arc children split
/// the parent resistance by a fraction in (0,1); loop children get a free
/// positive pair. Defaults reproduce the dyadic scheme.
struct CustomRules {
  double base_r1 = 0.5; // resistance of cell (1)
  double base_r2 = 0.5; // resistance of cell (2)
  /// Fraction of an arc cell's resistance given to child 1.
  std::function<double(const cells::CellAddress&)> arc_split;
  /// Resistances of the two arc children of a loop cell.
  std::function<std::pair<double, double>(const cells::CellAddress&)> loop_children;
};

/// Resistance assignment r_alpha for arc-type cells. The dyadic scheme puts
/// 2^-level on each cell; the conformal scheme puts 2^(-m/2) * r1 where m is
/// the cell's m_exponent; custom schemes follow CustomRules.
class Scheme {
public:
  enum class Kind { dyadic, conformal, custom };

  static Scheme dyadic();
  static Scheme conformal(double r1 = 0.5);
  static Scheme custom(CustomRules rules);

  Kind kind() const { return kind_; }
  double r1() const { return r1_; }
  std::string name() const;

  /// Resistance of an arc-type cell. Throws on loop-type input.
  double resistance(const cells::CellAddress& addr) const;

private:
  Scheme(Kind k, double r1) : kind_(k), r1_(r1) {}
  Kind kind_;
  double r1_ = 0.5;
  std::shared_ptr<const CustomRules> rules_;
};

struct ValidationReport {
  bool passed = true;
  std::string failure; // empty when passed; otherwise names the offending address
  std::vector<double> max_resistance; // per level 1..n
  bool decay_monotone = true;
  bool summability_hint = true; // empirical check of sum_n max_alpha r_alpha < inf
};

/// Checks positivity, the additive split r_alpha = r_a1 + r_a2 on arc cells,
/// and decay of the per-level max resistance, through level `up_to_level`.
ValidationReport validate(const Scheme& scheme, int up_to_level);
/// Same, but throws ValidationError instead of reporting.
void validate_or_throw(const Scheme& scheme, int up_to_level);

/// Weighted multigraph at one level: the graph of the filtration with a
/// resistance on every arc edge. Loops carry no resistance.
struct Network {
  int level = 0;
  int vertex_count = 0;
  struct Edge {
    int u, v;
    double resistance;
    bool loop;
    cells::CellAddress address;
  };
  std::vector<Edge> edges;
};

Network make_network(const cells::Filtration& f, const Scheme& scheme, int level);

/// Conductance Laplacian on the level's vertex set: 1/r per arc edge, loops
/// excluded. Positive semidefinite with a one-dimensional kernel.
numerics::SymMatrix resistance_laplacian(const Network& net);

/// Schur complement of the level-`from` Laplacian onto the vertices of level
/// `to`; by compatibility it equals the level-`to` Laplacian.
numerics::SymMatrix trace_form(const cells::Filtration& f, const Scheme& scheme, int from,
                               int to);

/// Effective resistance between two vertices via a grounded solve
/// (f(y) = 0, unit current at x).
double effective_resistance(const Network& net, int x, int y);

/// Repeated-query effective resistance: factors the grounded Laplacian once.
class ResistanceOracle {
public:
  explicit ResistanceOracle(const Network& net);
  double operator()(int x, int y) const;

private:
  int n_ = 0;
  std::vector<double> green_; // grounded inverse, (n-1)x(n-1) on vertices != ground
};

/// Local resistance metric: shortest-path distance over arc edges weighted
/// by their resistances. Loops never shorten a path and are excluded.
double local_metric(const Network& net, int x, int y);
/// Single-source distances, same metric.
std::vector<double> local_metric_from(const Network& net, int source);
/// Geodesic realizing local_metric: the list of arc edges used.
std::vector<int> local_geodesic(const Network& net, int x, int y);

/// Harmonic extension of values on the level-m vertex set up to level n by
/// the per-cell interpolation rule: arc midpoints split the parent values in
/// proportion to the child resistances, loop vertices copy their base value.
std::vector<double> harmonic_extension(const cells::Filtration& f, const Scheme& scheme,
                                       const std::vector<double>& boundary, int m, int n);

/// Energy-minimizing extension computed by a grounded linear solve; agrees
/// with harmonic_extension for compatible schemes.
std::vector<double> harmonic_minimizer(const cells::Filtration& f, const Scheme& scheme,
                                       const std::vector<double>& boundary, int m, int n);

double energy(const Network& net, const std::vector<double>& f);
double energy_bilinear(const Network& net, const std::vector<double>& f,
                       const std::vector<double>& g);
/// Sum of r^-1 (f(x) - f(y)) over arc edges at x.
double normal_derivative(const Network& net, const std::vector<double>& f, int x);

enum class MeasureKind { bernoulli, balanced, local_resistance };

/// Bernoulli mass of a cell: 1 / (4 * 3^(level-1)), exact.
Rational bernoulli_mass(const cells::CellAddress& addr);
/// Balanced invariant mass of a cell: 2^-k times the level-1 base mass,
/// where k is the number of dynamics steps down to level 1. Exact.
Rational balanced_mass(const cells::CellAddress& addr);
/// Local resistance measure of an arc cell's spine: r_alpha.
double local_resistance_spine(const cells::CellAddress& addr, const Scheme& scheme);
/// Local resistance measure of the circle bounding a loop cell:
/// r_(a.1) + r_(a.2).
double local_resistance_circle(const cells::CellAddress& addr, const Scheme& scheme);
/// The central circle (through both level-0 vertices): r_(1) + r_(2).
double local_resistance_central_circle(const Scheme& scheme);

/// Dispatch used by the CLI; local-resistance on a loop cell is a domain
/// error (that measure is evaluated on spines and circles only).
double measure(const cells::CellAddress& addr, MeasureKind kind, const Scheme& scheme);

/// Largest local-metric diameter over the cells of a level, evaluated on the
/// vertex set of `eval_level`.
double max_cell_s_diameter(const cells::Filtration& f, const Scheme& scheme, int cell_level,
                           int eval_level);

} // namespace basilica::forms
