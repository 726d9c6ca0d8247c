#pragma once

#include <cstddef>
#include <vector>

#include "lowlight/sparse.hpp"

namespace lowlight {

// Row-major dense matrix backing the small direct oracles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}

  static DenseMatrix identity(int n);
  static DenseMatrix from_sparse(const SparseSymMatrix& s);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

// LU with partial pivoting; throws when the matrix is singular to working
// precision. This is the direct route the iterative solver is checked against.
std::vector<double> dense_solve(DenseMatrix a, std::vector<double> b);

// Full spectrum of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> symmetric_eigenvalues(DenseMatrix a);

}  // namespace lowlight
