#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lowlight/sparse.hpp"

namespace lowlight {

// Diagonal preconditioner p_i = A_ii^{-1/2}; diag(p) A diag(p) has a unit
// diagonal by construction.
struct DiagPreconditioner {
  std::vector<double> p;
};

struct SolveReport {
  int iterations = 0;
  double final_relative_residual = 0.0;
  bool converged = false;
  std::optional<double> kappa_before;  // condition number of A, when tracked
  std::optional<double> kappa_after;   // of diag(p) A diag(p), when tracked
  double wall_seconds = 0.0;
};

// Requires a strictly positive diagonal.
DiagPreconditioner build_jacobi(const SparseSymMatrix& a);

// diag(p) A diag(p), formed explicitly.
SparseSymMatrix apply_jacobi(const SparseSymMatrix& a, const DiagPreconditioner& pre);

inline int default_max_iter(int n) { return 10 * n; }

// Conjugate gradients on a symmetric positive definite system, started from
// x = 0. With a preconditioner the scaled system diag(p) A diag(p) xh =
// diag(p) b is iterated and x = diag(p) xh returned; the convergence test is
// the relative 2-norm residual of the system actually iterated. A zero
// right-hand side returns x = 0 with zero iterations. Hitting max_iter
// returns the current iterate with converged = false; NaN/Inf or an
// indefinite direction raises.
std::pair<std::vector<double>, SolveReport> cg_solve(const SparseSymMatrix& a,
                                                     std::span<const double> b, double tol,
                                                     int max_iter,
                                                     const DiagPreconditioner* precond = nullptr);

enum class CondMethod { dense_eig, lanczos };

// lambda_max / lambda_min of a symmetric positive definite matrix. dense_eig
// computes the full spectrum (n capped at dense_cap) and serves as the oracle;
// lanczos estimates the extremes from a fully reorthogonalized Krylov basis
// for larger n. Eigenvalues at or below 1e-12 * lambda_max count as
// numerically zero and raise.
double estimate_condition_number(const SparseSymMatrix& a, CondMethod method,
                                 int dense_cap = 2000);

}  // namespace lowlight
