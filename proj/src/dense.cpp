#include "lowlight/dense.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace lowlight {

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_sparse(const SparseSymMatrix& s) {
  DenseMatrix m(s.n, s.n);
  for (int i = 0; i < s.n; ++i)
    for (int k = s.row_offsets[i]; k < s.row_offsets[i + 1]; ++k)
      m(i, s.col_indices[k]) = s.values[k];
  return m;
}

std::vector<double> dense_solve(DenseMatrix a, std::vector<double> b) {
  const int n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("dense_solve: matrix not square");
  if (static_cast<int>(b.size()) != n)
    throw std::invalid_argument("dense_solve: dimension mismatch");
  if (n == 0) return {};

  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  if (scale == 0.0) throw std::runtime_error("dense_solve: zero matrix");

  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        piv = i;
      }
    }
    if (best <= 1e-14 * scale)
      throw std::runtime_error("dense_solve: matrix singular to working precision");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    double sum = b[i];
    for (int j = i + 1; j < n; ++j) sum -= a(i, j) * b[j];
    b[i] = sum / a(i, i);
  }
  return b;
}

// Cyclic Jacobi. Quadratic convergence once off-diagonal mass is small; the
// rotations preserve symmetry so only the upper triangle drives the sweeps.
std::vector<double> symmetric_eigenvalues(DenseMatrix a) {
  const int n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("symmetric_eigenvalues: matrix not square");
  if (n == 0) return {};
  if (n == 1) return {a(0, 0)};

  double frob = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) frob += a(i, j) * a(i, j);
  frob = std::sqrt(frob);
  const double stop = 1e-15 * (frob + 1e-300);

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (std::sqrt(2.0 * off) <= stop) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= stop / n) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t =
            (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        const double app = a(p, p), aqq = a(q, q);
        a(p, p) = c * c * app - 2.0 * s * c * apq + s * s * aqq;
        a(q, q) = s * s * app + 2.0 * s * c * apq + c * c * aqq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(p, i) = a(i, p);
          a(i, q) = s * aip + c * aiq;
          a(q, i) = a(i, q);
        }
      }
    }
  }

  std::vector<double> eigs(n);
  for (int i = 0; i < n; ++i) eigs[i] = a(i, i);
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

}  // namespace lowlight
