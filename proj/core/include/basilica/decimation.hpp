#pragma once

#include "basilica/cells.hpp"
#include "basilica/numerics.hpp"
#include "basilica/rational.hpp"

#include <string>
#include <vector>

namespace basilica::decimation {

/// Walk parameters: p is the exit probability of a subdivision midpoint into
/// each of its two arc neighbors, q seeds the level-0 matrix [[q,-q],[-q,q]].
struct DecimationParams {
  double p = 0.25;
  double q = 0.25;
  void check() const;
};

/// The decimation map R(z) = ((2p+1)/p) z - z^2/p.
double rmap(double z, double p);
/// The two real preimages of w under R, ordered (minus branch, plus branch).
/// Throws when the discriminant (2p+1)^2 - 4pw is negative.
std::pair<double, double> preimages(double w, double p);

enum class Birth { initial, exceptional };

/// One eigenvalue of the level-n walk Laplacian with its provenance: initial
/// atoms descend from the level-0 spectrum {0, 2q} through n inverse
/// branches; exceptional atoms are born at the excluded value 2p and carry m
/// inverse branches. The lineage string records the chosen branches in
/// chronological order ('-' before '+' in enumeration).
struct SpectrumAtom {
  double z = 0.0;
  long long mult = 1;
  Birth birth = Birth::initial;
  int m = 0;           // branch count; equals the level for initial atoms
  std::string lineage; // length m
  double seed = 0.0;   // 0 or 2q for initial, 2p for exceptional
};

struct GraphSpectrum {
  int level = 0;
  std::vector<SpectrumAtom> atoms;
  std::vector<std::string> pruned; // notes for branches lost to a negative discriminant
  long long total_multiplicity() const;
};

/// Full eigenvalue list of the level-n walk Laplacian from the decimation
/// formulas: exceptional atoms at R^-m{2p} for m < n with multiplicity
/// 2*3^(n-m-1), plus R^-n{0, 2q} with multiplicity 1.
GraphSpectrum graph_spectrum(int n, const DecimationParams& prm);

/// The level-n walk Laplacian I - P and its reversibility data. Rows at
/// subdivision midpoints are (-p, -p, 2p); rows at older vertices inherit
/// their transition weights from the previous level, seeded at level 0 by
/// [[q,-q],[-q,q]]. `sym` is the conductance-symmetrized form with the same
/// spectrum, suitable for the dense eigensolver.
struct WalkMatrix {
  int level = 0;
  int size = 0;
  int old_count = 0;                 // vertices carried over from level n-1
  std::vector<double> raw;           // row-major I - P (not symmetric in general)
  std::vector<double> vertex_weight; // reversibility weights c(x)
  numerics::SymMatrix sym;

  double raw_at(int i, int j) const { return raw[static_cast<size_t>(i) * size + j]; }
  /// Residual ||(I-P) v - z v||_2 against the raw matrix.
  double residual(const std::vector<double>& v, double z) const;
};

WalkMatrix walk_matrix(const cells::Filtration& f, int n, const DecimationParams& prm);

/// Eigenfunction basis for an atom on the level-n vertex set. Initial atoms
/// yield one vector; exceptional atoms yield the full born eigenspace
/// propagated down the lineage. Every returned vector has walk residual
/// <= 1e-8 (verified).
std::vector<std::vector<double>> eigenfunction_basis(const cells::Filtration& f,
                                                     const SpectrumAtom& atom, int n,
                                                     const DecimationParams& prm);

/// Atom of the integrated density of states: weight 2*3^-(m+1) at each
/// branch-enumerated point of R^-m{2p}. Weights are normalized per 3^n, so
/// they total 2 in the limit.
struct IdsAtom {
  double z = 0.0;
  int m = 0;
  std::string lineage;
  Rational weight;
};

std::vector<IdsAtom> ids(int max_m, const DecimationParams& prm);

} // namespace basilica::decimation
