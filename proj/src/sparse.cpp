#include "lowlight/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lowlight {

SparseSymMatrix SparseSymMatrix::from_triplets(int n, std::vector<Triplet> triplets) {
  if (n < 0) throw std::invalid_argument("from_triplets: negative dimension");
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
      throw std::invalid_argument("from_triplets: index out of range");
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseSymMatrix m;
  m.n = n;
  m.row_offsets.assign(n + 1, 0);
  m.col_indices.reserve(triplets.size());
  m.values.reserve(triplets.size());

  size_t k = 0;
  for (int row = 0; row < n; ++row) {
    m.row_offsets[row] = static_cast<int>(m.values.size());
    while (k < triplets.size() && triplets[k].row == row) {
      const int col = triplets[k].col;
      double sum = 0.0;
      while (k < triplets.size() && triplets[k].row == row && triplets[k].col == col) {
        sum += triplets[k].value;  // duplicates collapse here
        ++k;
      }
      m.col_indices.push_back(col);
      m.values.push_back(sum);
    }
  }
  m.row_offsets[n] = static_cast<int>(m.values.size());
  return m;
}

double SparseSymMatrix::diagonal(int i) const {
  if (i < 0 || i >= n) throw std::invalid_argument("diagonal: index out of range");
  const auto b = col_indices.begin() + row_offsets[i];
  const auto e = col_indices.begin() + row_offsets[i + 1];
  const auto it = std::lower_bound(b, e, i);
  if (it != e && *it == i) return values[it - col_indices.begin()];
  return 0.0;
}

bool SparseSymMatrix::is_symmetric(double tol) const {
  for (int i = 0; i < n; ++i) {
    for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
      const int j = col_indices[k];
      const auto b = col_indices.begin() + row_offsets[j];
      const auto e = col_indices.begin() + row_offsets[j + 1];
      const auto it = std::lower_bound(b, e, i);
      if (it == e || *it != i) return false;
      const double vt = values[it - col_indices.begin()];
      if (std::abs(vt - values[k]) > tol) return false;
    }
  }
  return true;
}

void matvec(const SparseSymMatrix& a, std::span<const double> x, std::span<double> y) {
  if (static_cast<int>(x.size()) != a.n || static_cast<int>(y.size()) != a.n)
    throw std::invalid_argument("matvec: dimension mismatch");
#pragma omp parallel for schedule(static) if (a.n >= 16384)
  for (int i = 0; i < a.n; ++i) {
    double sum = 0.0;
    for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k)
      sum += a.values[k] * x[a.col_indices[k]];
    y[i] = sum;
  }
}

std::vector<double> matvec(const SparseSymMatrix& a, std::span<const double> x) {
  std::vector<double> y(a.n);
  matvec(a, x, y);
  return y;
}

}  // namespace lowlight
