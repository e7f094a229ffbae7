#pragma once

#include "basilica/errors.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace basilica::cells {

enum class CellKind : std::uint8_t { arc, loop };

/// Symbolic address of a cell: a head symbol in {1,2,3,4} followed by a
/// (possibly empty) tail over {1,2,3}. The address length ("level") is
/// 1 + tail length; there are 4*3^(level-1) addresses of a given level.
///
/// Kind rule: a cell is a loop iff its last symbol is 3, or it is one of
/// the two level-1 arms (3) and (4).
class CellAddress {
public:
  explicit CellAddress(int head, std::vector<std::uint8_t> tail = {});

  /// Parses the dot-separated form, e.g. "1.3.2".
  static CellAddress parse(const std::string& text);

  int head() const { return head_; }
  const std::vector<std::uint8_t>& tail() const { return tail_; }
  int level() const { return 1 + static_cast<int>(tail_.size()); }
  CellKind kind() const;

  CellAddress child(int symbol) const; // symbol in {1,2,3}
  std::string str() const;             // dot-separated

  friend bool operator==(const CellAddress& a, const CellAddress& b) {
    return a.head_ == b.head_ && a.tail_ == b.tail_;
  }
  friend bool operator<(const CellAddress& a, const CellAddress& b) {
    if (a.head_ != b.head_) return a.head_ < b.head_;
    return a.tail_ < b.tail_;
  }

private:
  std::uint8_t head_;
  std::vector<std::uint8_t> tail_;
};

/// The three children of a cell in subdivision order: two arcs then the loop.
std::array<CellAddress, 3> children(const CellAddress& addr);

/// One step of the address action of the quadratic map underneath the cell
/// structure: (1,w)->(3,w), (2,w)->(3,w), (3,j.w)->(tau(j),w),
/// (4,j.w)->(tau(j),w) with tau = {1->1, 2->2, 3->4}.
/// The bare arms (3) and (4) are not in the domain.
CellAddress address_dynamics(const CellAddress& addr);

/// Smallest m such that m applications of address_dynamics reach (1) or (2).
/// Defined for arc-type addresses only; m((1)) = m((2)) = 0.
int m_exponent(const CellAddress& addr);

/// One edge of a level graph. Arc edges join two distinct vertices; loop
/// edges have endpoint() == other_endpoint(). `midpoint` is the vertex
/// created when this cell is subdivided (-1 until that level is built).
struct Cell {
  CellAddress address;
  CellKind kind;
  int v1 = -1;
  int v2 = -1;
  int midpoint = -1;
};

/// Multigraph at one level: 2*3^n vertices and 4*3^n edges, the edges
/// being the cells of address length n+1. Degree is 4 at every vertex for
/// n >= 1 when loops are counted twice.
struct Multigraph {
  int level = 0;
  int vertex_count = 0;
  std::vector<Cell> edges;

  int arc_edge_count() const;
  int loop_edge_count() const;
  /// Total degree with loops counted twice.
  std::vector<int> degrees() const;
};

/// The nested graph sequence G_0..G_n with stable vertex ids: vertex ids of
/// G_k are 0..2*3^k-1 and are shared across levels. Vertices are numbered in
/// breadth-first subdivision order, arc children before the loop child.
class Filtration {
public:
  static constexpr int kDefaultMaxLevel = 10;

  /// Builds levels 0..n. Throws CapacityError when n exceeds the budget.
  static Filtration build(int n, int max_level = kDefaultMaxLevel);

  int level() const { return static_cast<int>(graphs_.size()) - 1; }
  const Multigraph& graph(int k) const;
  int vertex_count(int k) const { return graph(k).vertex_count; }

private:
  std::vector<Multigraph> graphs_;
};

} // namespace basilica::cells
