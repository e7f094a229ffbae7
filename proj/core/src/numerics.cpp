#include "basilica/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace basilica::numerics {

namespace {

void require_finite(const SymMatrix& m, const char* who) {
  for (double v : m.data())
    if (!std::isfinite(v)) throw ValidationError(std::string(who) + ": non-finite matrix entry");
}

/// Householder reduction of a (destroyed) to tridiagonal form; on return a
/// holds the accumulated orthogonal transform, d the diagonal, e the
/// subdiagonal (e[0] unused).
void tred2(std::vector<double>& a, int n, std::vector<double>& d, std::vector<double>& e) {
  auto at = [&](int i, int j) -> double& { return a[static_cast<size_t>(i) * n + j]; };

  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    double h = 0.0, scale = 0.0;
    if (l > 0) {
      for (int k = 0; k <= l; ++k) scale += std::fabs(at(i, k));
      if (scale == 0.0) {
        e[i] = at(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          at(i, k) /= scale;
          h += at(i, k) * at(i, k);
        }
        double f = at(i, l);
        double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        at(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          at(j, i) = at(i, j) / h;
          g = 0.0;
          for (int k = 0; k <= j; ++k) g += at(j, k) * at(i, k);
          for (int k = j + 1; k <= l; ++k) g += at(k, j) * at(i, k);
          e[j] = g / h;
          f += e[j] * at(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = at(i, j);
          e[j] = g = e[j] - hh * f;
          for (int k = 0; k <= j; ++k) at(j, k) -= f * e[k] + g * at(i, k);
        }
      }
    } else {
      e[i] = at(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    const int l = i - 1;
    if (d[i] != 0.0) {
      for (int j = 0; j <= l; ++j) {
        double g = 0.0;
        for (int k = 0; k <= l; ++k) g += at(i, k) * at(k, j);
        for (int k = 0; k <= l; ++k) at(k, j) -= g * at(k, i);
      }
    }
    d[i] = at(i, i);
    at(i, i) = 1.0;
    for (int j = 0; j <= l; ++j) at(j, i) = at(i, j) = 0.0;
  }
}

/// Implicit-shift QL on the tridiagonal (d, e), accumulating rotations into z.
void tql2(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z, int n) {
  auto zt = [&](int i, int j) -> double& { return z[static_cast<size_t>(i) * n + j]; };

  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= 1e-300 || std::fabs(e[m]) <= 2.3e-16 * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) throw SingularMatrixError("sym_eig: QL iteration did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int k = 0; k < n; ++k) {
            f = zt(k, i + 1);
            zt(k, i + 1) = s * zt(k, i) + c * f;
            zt(k, i) = c * zt(k, i) - s * f;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

void sort_ascending(std::vector<double>& d, std::vector<double>& z, int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });
  std::vector<double> d2(n);
  std::vector<double> z2(z.size());
  for (int k = 0; k < n; ++k) {
    d2[k] = d[order[k]];
    for (int i = 0; i < n; ++i)
      z2[static_cast<size_t>(i) * n + k] = z[static_cast<size_t>(i) * n + order[k]];
  }
  d = std::move(d2);
  z = std::move(z2);
}

double verify_residual(const SymMatrix& m, const std::vector<double>& d,
                       const std::vector<double>& z) {
  const int n = m.order();
  double worst = 0.0;
  std::vector<double> col(n), mv(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) col[i] = z[static_cast<size_t>(i) * n + k];
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      const double* row = m.data().data() + static_cast<size_t>(i) * n;
      for (int j = 0; j < n; ++j) s += row[j] * col[j];
      mv[i] = s;
    }
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = mv[i] - d[k] * col[i];
      r2 += r * r;
    }
    worst = std::max(worst, std::sqrt(r2));
  }
  return worst;
}

} // namespace

SymMatrix SymMatrix::from_rows(int n, const std::vector<double>& rows) {
  if (static_cast<size_t>(n) * n != rows.size())
    throw ValidationError("SymMatrix::from_rows: size mismatch");
  SymMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (rows[static_cast<size_t>(i) * n + j] != rows[static_cast<size_t>(j) * n + i])
        throw ValidationError("SymMatrix::from_rows: input not symmetric");
      m.a_[static_cast<size_t>(i) * n + j] = rows[static_cast<size_t>(i) * n + j];
    }
  return m;
}

double SymMatrix::max_abs() const {
  double v = 0.0;
  for (double x : a_) v = std::max(v, std::fabs(x));
  return v;
}

double SymMatrix::inf_norm() const {
  double best = 0.0;
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int j = 0; j < n_; ++j) s += std::fabs(a_[static_cast<size_t>(i) * n_ + j]);
    best = std::max(best, s);
  }
  return best;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < n_; ++i) t += a_[static_cast<size_t>(i) * n_ + i];
  return t;
}

std::vector<double> EigDecomposition::eigenvector(int k) const {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = vectors[static_cast<size_t>(i) * n + k];
  return v;
}

EigDecomposition sym_eig(const SymMatrix& m) {
  const int n = m.order();
  if (n <= 0) throw ValidationError("sym_eig: empty matrix");
  if (n > kMaxEigOrder)
    throw CapacityError("sym_eig: order " + std::to_string(n) + " exceeds dense budget " +
                        std::to_string(kMaxEigOrder));
  require_finite(m, "sym_eig");

  EigDecomposition out;
  out.n = n;
  out.vectors = m.data();
  out.values.assign(n, 0.0);
  std::vector<double> e(n, 0.0);

  if (n == 1) {
    out.values[0] = m(0, 0);
    out.vectors[0] = 1.0;
    out.residual = 0.0;
    return out;
  }

  tred2(out.vectors, n, out.values, e);
  tql2(out.values, e, out.vectors, n);
  sort_ascending(out.values, out.vectors, n);

  out.residual = verify_residual(m, out.values, out.vectors);
  const double bound = 1e-10 * n * std::max(m.inf_norm(), 1e-300);
  if (out.residual > bound)
    throw InvariantError("sym_eig: residual " + std::to_string(out.residual) +
                         " exceeds bound " + std::to_string(bound));
  return out;
}

SymMatrix schur_complement(const SymMatrix& m, const std::vector<int>& keep) {
  const int n = m.order();
  std::vector<char> kept(n, 0);
  for (int i : keep) {
    if (i < 0 || i >= n) throw ValidationError("schur_complement: keep index out of range");
    if (kept[i]) throw ValidationError("schur_complement: duplicate keep index");
    kept[i] = 1;
  }
  std::vector<int> drop;
  for (int i = 0; i < n; ++i)
    if (!kept[i]) drop.push_back(i);

  const int a = static_cast<int>(keep.size());
  const int d = static_cast<int>(drop.size());
  if (d == 0) {
    SymMatrix out(a);
    for (int i = 0; i < a; ++i)
      for (int j = i; j < a; ++j) out.set(i, j, m(keep[i], keep[j]));
    return out;
  }

  // LU with partial pivoting on the discarded block.
  std::vector<double> lu(static_cast<size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) lu[static_cast<size_t>(i) * d + j] = m(drop[i], drop[j]);
  std::vector<int> piv(d);
  std::iota(piv.begin(), piv.end(), 0);
  const double tol = 1e-13 * std::max(m.max_abs(), 1e-300);
  for (int k = 0; k < d; ++k) {
    int best = k;
    double bv = std::fabs(lu[static_cast<size_t>(k) * d + k]);
    for (int i = k + 1; i < d; ++i) {
      const double v = std::fabs(lu[static_cast<size_t>(i) * d + k]);
      if (v > bv) {
        bv = v;
        best = i;
      }
    }
    if (bv <= tol)
      throw SingularMatrixError("schur_complement: discarded block is singular at pivot " +
                                std::to_string(k) + " (original index " +
                                std::to_string(drop[piv[best]]) + ")");
    if (best != k) {
      for (int j = 0; j < d; ++j)
        std::swap(lu[static_cast<size_t>(k) * d + j], lu[static_cast<size_t>(best) * d + j]);
      std::swap(piv[k], piv[best]);
    }
    const double pivval = lu[static_cast<size_t>(k) * d + k];
    for (int i = k + 1; i < d; ++i) {
      const double f = lu[static_cast<size_t>(i) * d + k] / pivval;
      lu[static_cast<size_t>(i) * d + k] = f;
      for (int j = k + 1; j < d; ++j)
        lu[static_cast<size_t>(i) * d + j] -= f * lu[static_cast<size_t>(k) * d + j];
    }
  }

  // X = D^{-1} C, column by column (C columns indexed by kept vertices).
  std::vector<double> x(static_cast<size_t>(d) * a);
  std::vector<double> rhs(d);
  for (int j = 0; j < a; ++j) {
    for (int i = 0; i < d; ++i) rhs[i] = m(drop[piv[i]], keep[j]);
    for (int k = 0; k < d; ++k)
      for (int i = k + 1; i < d; ++i) rhs[i] -= lu[static_cast<size_t>(i) * d + k] * rhs[k];
    for (int k = d - 1; k >= 0; --k) {
      for (int i = k + 1; i < d; ++i) rhs[k] -= lu[static_cast<size_t>(k) * d + i] * rhs[i];
      rhs[k] /= lu[static_cast<size_t>(k) * d + k];
    }
    for (int i = 0; i < d; ++i) x[static_cast<size_t>(i) * a + j] = rhs[i];
  }

  SymMatrix out(a);
  for (int i = 0; i < a; ++i)
    for (int j = i; j < a; ++j) {
      double s = m(keep[i], keep[j]);
      for (int k = 0; k < d; ++k) s -= m(keep[i], drop[k]) * x[static_cast<size_t>(k) * a + j];
      out.set(i, j, s);
    }
  // Clean residual asymmetry from the two triangle fills.
  for (int i = 0; i < a; ++i)
    for (int j = i + 1; j < a; ++j) {
      const double v = 0.5 * (out(i, j) + out(j, i));
      out.set(i, j, v);
    }
  return out;
}

EigDecomposition gen_eig(const SymMatrix& l, const std::vector<double>& mass) {
  const int n = l.order();
  if (static_cast<int>(mass.size()) != n) throw ValidationError("gen_eig: mass size mismatch");
  for (double v : mass)
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("gen_eig: masses must be positive");

  std::vector<double> si(n);
  for (int i = 0; i < n; ++i) si[i] = 1.0 / std::sqrt(mass[i]);
  SymMatrix b(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) b.set(i, j, l(i, j) * si[i] * si[j]);

  EigDecomposition dec = sym_eig(b);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) dec.vectors[static_cast<size_t>(i) * n + k] *= si[i];
  return dec;
}

CholeskyFactor::CholeskyFactor(const SymMatrix& a) : n_(a.order()), l_(a.data()) {
  auto at = [&](int i, int j) -> double& { return l_[static_cast<size_t>(i) * n_ + j]; };
  for (int j = 0; j < n_; ++j) {
    double d = at(j, j);
    for (int k = 0; k < j; ++k) d -= at(j, k) * at(j, k);
    if (!(d > 0.0))
      throw SingularMatrixError("cholesky: matrix not positive definite at pivot " +
                                std::to_string(j));
    const double lj = std::sqrt(d);
    at(j, j) = lj;
    for (int i = j + 1; i < n_; ++i) {
      double s = at(i, j);
      for (int k = 0; k < j; ++k) s -= at(i, k) * at(j, k);
      at(i, j) = s / lj;
    }
  }
}

std::vector<double> CholeskyFactor::solve(const std::vector<double>& b) const {
  if (static_cast<int>(b.size()) != n_) throw ValidationError("cholesky solve: size mismatch");
  std::vector<double> x = b;
  for (int i = 0; i < n_; ++i) {
    double s = x[i];
    for (int k = 0; k < i; ++k) s -= l_[static_cast<size_t>(i) * n_ + k] * x[k];
    x[i] = s / l_[static_cast<size_t>(i) * n_ + i];
  }
  for (int i = n_ - 1; i >= 0; --i) {
    double s = x[i];
    for (int k = i + 1; k < n_; ++k) s -= l_[static_cast<size_t>(k) * n_ + i] * x[k];
    x[i] = s / l_[static_cast<size_t>(i) * n_ + i];
  }
  return x;
}

std::vector<double> solve_spd(const SymMatrix& a, const std::vector<double>& b) {
  return CholeskyFactor(a).solve(b);
}

} // namespace basilica::numerics
