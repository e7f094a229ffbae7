#pragma once

#include "basilica/errors.hpp"

#include <vector>

namespace basilica::numerics {

/// Dense symmetric matrix. Symmetry is enforced on construction and by the
/// paired setter, so m(i,j) == m(j,i) holds exactly at all times.
class SymMatrix {
public:
  SymMatrix() = default;
  explicit SymMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, 0.0) {}

  /// Builds from a full row-major buffer; throws if it is not symmetric.
  static SymMatrix from_rows(int n, const std::vector<double>& rows);

  int order() const { return n_; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
  void set(int i, int j, double v) {
    a_[static_cast<size_t>(i) * n_ + j] = v;
    a_[static_cast<size_t>(j) * n_ + i] = v;
  }
  void add(int i, int j, double v) {
    a_[static_cast<size_t>(i) * n_ + j] += v;
    if (i != j) a_[static_cast<size_t>(j) * n_ + i] += v;
  }

  const std::vector<double>& data() const { return a_; }
  double max_abs() const;
  /// Infinity norm (max row sum); dominates the spectral radius.
  double inf_norm() const;
  double trace() const;

private:
  int n_ = 0;
  std::vector<double> a_;
};

/// Eigendecomposition with eigenvalues ascending and orthonormal
/// eigenvectors stored as columns of `vectors` (row-major: component i of
/// eigenvector k sits at vectors[i*n + k]). `residual` is the verified
/// max_i ||M v_i - lambda_i v_i||_2.
struct EigDecomposition {
  int n = 0;
  std::vector<double> values;
  std::vector<double> vectors;
  double residual = 0.0;

  double vector_at(int k, int i) const { return vectors[static_cast<size_t>(i) * n + k]; }
  std::vector<double> eigenvector(int k) const;
};

inline constexpr int kMaxEigOrder = 4096;

/// Deterministic dense symmetric eigensolver: Householder tridiagonalization
/// followed by implicit-shift QL, fixed sweep order. Verifies the residual
/// bound ||M v - lambda v|| <= 1e-10 * n * ||M||_inf before returning.
EigDecomposition sym_eig(const SymMatrix& m);

/// Schur complement onto the `keep` index set: A - B D^{-1} C where D is the
/// block on the discarded indices. Throws SingularMatrixError if D is
/// singular, naming the offending pivot.
SymMatrix schur_complement(const SymMatrix& m, const std::vector<int>& keep);

/// Eigenvalues/vectors of M^{-1/2} L M^{-1/2} for a diagonal positive mass
/// matrix, with eigenvectors returned in the original coordinates (so they
/// satisfy L u = lambda diag(mass) u and are mass-orthonormal).
EigDecomposition gen_eig(const SymMatrix& l, const std::vector<double>& mass);

/// Solves A x = b for symmetric positive definite A via Cholesky.
std::vector<double> solve_spd(const SymMatrix& a, const std::vector<double>& b);

/// Cholesky factorization held for repeated right-hand sides.
class CholeskyFactor {
public:
  explicit CholeskyFactor(const SymMatrix& a);
  int order() const { return n_; }
  std::vector<double> solve(const std::vector<double>& b) const;

private:
  int n_ = 0;
  std::vector<double> l_;
};

} // namespace basilica::numerics
