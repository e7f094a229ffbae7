#pragma once

#include "basilica/decimation.hpp"
#include "basilica/graphdir.hpp"
#include "basilica/numerics.hpp"
#include "basilica/rational.hpp"

#include <string>
#include <vector>

namespace basilica::spectra {

/// Contracting inverse branch of the p=1/4 decimation map at its fixed
/// point 0: psi(x) = (3 - sqrt(9 - 4x)) / 4, with psi'(0) = 1/6.
double psi(double x);

/// Koenigs linearizer Psi(x) = lim 6^k psi^k(x), normalized so Psi(0) = 0
/// and Psi'(0) = 1. Converges geometrically at rate ~1/6; iteration stops
/// when successive estimates differ by less than tol (cap 60 iterates).
double linearizer(double x, double tol = 1e-12);

/// One eigenvalue of the renormalized limit operator. Dirichlet atoms carry
/// lambda = -8 * 6^n0 * Psi(w) where w is the branch-enumerated element of
/// R^-m(1/2); atoms descending from the level-0 values {0, 2q} are emitted
/// as unverified Neumann candidates.
struct FractalAtom {
  enum class Kind { dirichlet, neumann_candidate };
  double lambda = 0.0;
  long long mult = 1;
  int n0 = 1;
  int m = 0;
  std::string branch;
  Kind kind = Kind::dirichlet;
  double seed_value = 0.5; // the level-n0 branch value the linearizer was fed
};

/// Dirichlet atoms for n0 = 1..max_n0, m = 0..n0-1, all 2^m branch words,
/// sorted by |lambda|. Multiplicity is 2*3^(n0-m-1).
std::vector<FractalAtom> dirichlet_spectrum(int max_n0);

/// Atoms descending from the level-0 eigenvalues {0, 2q}; completeness of
/// these is not established, so they are flagged as candidates.
std::vector<FractalAtom> neumann_candidates(int max_n0, double q = 0.25);

struct WeylFit {
  double slope = 0.0;
  double intercept = 0.0;
  int points = 0;
};

/// Least-squares slope of log N(lambda) against log lambda over the atoms
/// whose location lies in [lo, hi]. N counts multiplicity cumulatively.
/// Throws when fewer than 30 atoms land in the window.
WeylFit weyl_fit(const std::vector<std::pair<double, long long>>& atoms, double lo, double hi);

inline constexpr int kMaxGraphDirectedLevel = 11;

/// Normalization of the generalized eigenproblem on the substitution graphs.
/// `conformal` uses the compatible resistances and the balanced masses, so
/// eigenvalues converge level by level to those of the limit operator.
/// `stationary` rescales resistances by sqrt(2)^n and masses by 2^-n, the
/// combinatorially stationary rule, under which low eigenvalues contract by
/// 1/(2 sqrt 2) per generation.
enum class GdNormalization { conformal, stationary };

/// Generalized eigenvalues L u = lambda M u on the generation-n graph with
/// the resistance Laplacian and lumped balanced masses, ascending.
struct GraphDirectedSpectrum {
  int level = 0;
  std::vector<double> values;
  numerics::EigDecomposition decomposition; // eigenvectors in original coordinates
};

GraphDirectedSpectrum graphdirected_spectrum(int n, double r1 = 0.5,
                                             GdNormalization norm = GdNormalization::conformal);

/// Exact spectral exponents of the substitution sequence: the counting
/// matrix has spectral radius 2 and the per-generation time scale is
/// 2*sqrt(2), so s = 2/3 and d_s = 4/3 exactly.
std::pair<Rational, Rational> symbolic_ds();

/// Generic pipeline: d_s = 2 log(count_growth) / log(time_scale).
double spectral_dimension_from(double count_growth, double time_scale);

} // namespace basilica::spectra
