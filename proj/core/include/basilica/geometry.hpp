#pragma once

#include "basilica/cells.hpp"
#include "basilica/graphdir.hpp"

#include <array>
#include <complex>
#include <vector>

namespace basilica::geometry {

using Complex = std::complex<double>;

/// The quadratic map underneath the cell structure.
inline Complex apply_map(Complex z) { return z * z - 1.0; }

/// The two repelling fixed points ((1 -/+ sqrt 5)/2, as (a, b)).
std::pair<double, double> fixed_points();

inline constexpr int kMaxOrbitDepth = 24;

/// All 2^n n-fold inverse images of the fixed point a, by full deterministic
/// enumeration of the branches +/- sqrt(z+1) (plus branch first).
std::vector<Complex> backward_orbit(int n);

/// Membership test of a point of the Julia set in a cell, implemented by
/// classifying against the four level-1 pieces and recursing through the
/// address dynamics.
bool cell_contains(Complex z, const cells::CellAddress& addr);

/// Deterministic schematic layout of the level-n self-similar graph: arcs on
/// circles, loop decorations as externally tangent circles shrinking with
/// the subdivision. Coordinates indexed by vertex id; the two level-0
/// vertices sit at (-1,0) and (1,0).
std::vector<std::array<double, 2>> layout_self_similar(const cells::Filtration& f, int level);

/// Same convention for the graph-directed sequence.
std::vector<std::array<double, 2>> layout_graph_directed(int generation);

} // namespace basilica::geometry
