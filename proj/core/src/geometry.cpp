#include "basilica/geometry.hpp"

#include <cmath>
#include <numbers>

namespace basilica::geometry {

using cells::CellAddress;
using cells::CellKind;

std::pair<double, double> fixed_points() {
  const double s = std::sqrt(5.0);
  return {(1.0 - s) / 2.0, (1.0 + s) / 2.0};
}

std::vector<Complex> backward_orbit(int n) {
  if (n < 0) throw ValidationError("backward_orbit needs n >= 0");
  if (n > kMaxOrbitDepth)
    throw CapacityError("backward_orbit depth " + std::to_string(n) + " exceeds " +
                        std::to_string(kMaxOrbitDepth));
  const auto [a, b] = fixed_points();
  (void)b;
  std::vector<Complex> pts = {Complex(a, 0.0)};
  for (int k = 0; k < n; ++k) {
    std::vector<Complex> next;
    next.reserve(pts.size() * 2);
    for (const Complex& z : pts) {
      const Complex w = std::sqrt(z + 1.0);
      next.push_back(w);
      next.push_back(-w);
    }
    pts = std::move(next);
  }
  return pts;
}

bool cell_contains(Complex z, const CellAddress& addr) {
  const auto [a, b] = fixed_points();
  (void)b;
  const double re = z.real();
  bool in_head = false;
  switch (addr.head()) {
    case 1: in_head = re >= a && re <= -a && z.imag() >= 0.0; break;
    case 2: in_head = re >= a && re <= -a && z.imag() < 0.0; break;
    case 3: in_head = re < a; break;
    case 4: in_head = re > -a; break;
  }
  if (!in_head) return false;
  if (addr.level() == 1) return true;
  return cell_contains(apply_map(z), cells::address_dynamics(addr));
}

namespace {

constexpr double kPi = std::numbers::pi;

struct Circle {
  double cx, cy, r;
  std::array<double, 2> at(double angle) const {
    return {cx + r * std::cos(angle), cy + r * std::sin(angle)};
  }
};

/// Geometry of one edge: arcs live on a circle between angles a0 and
/// a0+sweep; loops are whole circles attached at their base angle.
struct EdgeGeom {
  bool arc = true;
  Circle c{0, 0, 1};
  double a0 = 0.0;    // arcs: start angle (position of v1)
  double sweep = 0.0; // arcs: signed sweep to v2
  double base = 0.0;  // loops: angle of the attaching vertex
};

Circle tangent_circle(const Circle& c, double angle, double radius) {
  return Circle{c.cx + (c.r + radius) * std::cos(angle),
                c.cy + (c.r + radius) * std::sin(angle), radius};
}

/// Loop decoration radius for an arc of the given sweep: ratio 1/3 for a
/// half-circle arc, shrinking proportionally with the arc.
double decoration_radius(const Circle& c, double sweep) {
  return c.r / 3.0 * (std::fabs(sweep) / kPi);
}

struct SubdividedGeom {
  EdgeGeom child1, child2, child3;
  std::array<double, 2> fresh; // position of the new vertex
};

SubdividedGeom subdivide(const EdgeGeom& g) {
  SubdividedGeom out;
  if (g.arc) {
    const double mid = g.a0 + g.sweep / 2.0;
    out.child1 = {true, g.c, g.a0, g.sweep / 2.0, 0.0};
    out.child2 = {true, g.c, mid, g.sweep / 2.0, 0.0};
    const double rho = decoration_radius(g.c, g.sweep);
    out.child3 = {false, tangent_circle(g.c, mid, rho), 0.0, 0.0, mid + kPi};
    out.fresh = g.c.at(mid);
  } else {
    const double far = g.base + kPi;
    out.child1 = {true, g.c, g.base, kPi, 0.0};
    out.child2 = {true, g.c, g.base, -kPi, 0.0};
    const double rho = g.c.r / 3.0;
    out.child3 = {false, tangent_circle(g.c, far, rho), 0.0, 0.0, far + kPi};
    out.fresh = g.c.at(far);
  }
  return out;
}

} // namespace

std::vector<std::array<double, 2>> layout_self_similar(const cells::Filtration& f, int level) {
  if (level < 0 || level > f.level())
    throw ValidationError("layout level out of range");
  std::vector<std::array<double, 2>> pos = {{-1.0, 0.0}, {1.0, 0.0}};
  const Circle central{0.0, 0.0, 1.0};
  // Level-0 edges in filtration order: top arc, bottom arc, loop at vertex 0,
  // loop at vertex 1.
  std::vector<EdgeGeom> geom = {
      {true, central, kPi, -kPi, 0.0},
      {true, central, kPi, kPi, 0.0},
      {false, tangent_circle(central, kPi, 1.0 / 3.0), 0.0, 0.0, 0.0},
      {false, tangent_circle(central, 0.0, 1.0 / 3.0), 0.0, 0.0, kPi},
  };
  for (int k = 0; k < level; ++k) {
    std::vector<EdgeGeom> next;
    next.reserve(geom.size() * 3);
    for (const auto& g : geom) {
      auto sub = subdivide(g);
      pos.push_back(sub.fresh);
      next.push_back(sub.child1);
      next.push_back(sub.child2);
      next.push_back(sub.child3);
    }
    geom = std::move(next);
  }
  pos.resize(f.vertex_count(level));
  return pos;
}

std::vector<std::array<double, 2>> layout_graph_directed(int generation) {
  if (generation < 0 || generation > graphdir::kMaxGeneration)
    throw ValidationError("layout generation out of range");
  std::vector<std::array<double, 2>> pos = {{-1.0, 0.0}};
  const Circle central{0.0, 0.0, 1.0};
  std::vector<std::pair<char, EdgeGeom>> geom = {
      {'A', {false, tangent_circle(central, kPi, 1.0 / 3.0), 0.0, 0.0, 0.0}},
      {'B', {false, central, 0.0, 0.0, kPi}},
  };
  for (int k = 0; k < generation; ++k) {
    std::vector<std::pair<char, EdgeGeom>> next;
    next.reserve(geom.size() * 3);
    for (const auto& [label, g] : geom) {
      if (label == 'A') {
        next.push_back({'B', g});
        continue;
      }
      auto sub = subdivide(g);
      pos.push_back(sub.fresh);
      next.push_back({'A', sub.child1});
      next.push_back({'A', sub.child2});
      next.push_back({'B', sub.child3});
    }
    geom = std::move(next);
  }
  return pos;
}

} // namespace basilica::geometry
