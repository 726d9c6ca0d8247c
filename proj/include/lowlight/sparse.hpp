#pragma once

#include <span>
#include <vector>

namespace lowlight {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Symmetric sparse matrix in compressed-row storage. Both triangles are
// stored; column indices are strictly increasing within each row. Immutable
// after construction, so instances can be shared across threads.
struct SparseSymMatrix {
  int n = 0;
  std::vector<int> row_offsets;  // size n + 1
  std::vector<int> col_indices;
  std::vector<double> values;

  // Duplicate (row, col) entries are summed. Every generated entry is kept,
  // exact zeros included.
  static SparseSymMatrix from_triplets(int n, std::vector<Triplet> triplets);

  int nnz() const { return static_cast<int>(values.size()); }
  double diagonal(int i) const;  // 0 when the entry is absent
  bool is_symmetric(double tol = 0.0) const;
};

// y = A x
void matvec(const SparseSymMatrix& a, std::span<const double> x, std::span<double> y);
std::vector<double> matvec(const SparseSymMatrix& a, std::span<const double> x);

}  // namespace lowlight
