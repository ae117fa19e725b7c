#pragma once

/// \file solver.hpp
/// Solution of A u = b on the subspace c^T u = 0.

#include <Eigen/Core>

#include "tracefem/error.hpp"
#include "tracefem/sparse.hpp"

namespace tracefem {

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;              // CG recurrence residual, relative to ||P b||
  double true_residual = 0.0;         // ||P(Au - b)|| / ||P b|| recomputed from u
  double constraint_violation = 0.0;  // |c.u| / (||c|| ||u||)
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, SolveReport report)
      : Error(what), report_(report) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

struct SolveResult {
  Eigen::VectorXd u;
  SolveReport report;
};

enum class Preconditioner {
  jacobi,    // diagonal of A
  cholesky,  // sparse Cholesky of A with one dof pinned (CHOLMOD)
};

/// Preconditioned conjugate gradients on P A P with P = I - c c^T/|c|^2.
/// b is projected once; every iterate stays in the constraint subspace.
/// Stops when the recurrence residual drops below `tol`. The recomputed
/// residual is reported too; in double precision it levels off near
/// eps * ||A|| ||u|| / ||b||, which for fourth-order problems grows like h^-4.
/// `max_iter` <= 0 selects 50 * ndof.
SolveResult solve_constrained(const SparseMatrix& a, const Eigen::VectorXd& b,
                              const Eigen::VectorXd& c, double tol = 1e-10, int max_iter = 0,
                              Preconditioner preconditioner = Preconditioner::jacobi);

/// Dense LU solve of the bordered system [A c; c^T 0] (ndof <= 2000).
Eigen::VectorXd solve_bordered_dense(const SparseMatrix& a, const Eigen::VectorXd& b,
                                     const Eigen::VectorXd& c);

/// Orthonormal basis of the complement of c (ndof x (ndof - 1)).
Eigen::MatrixXd constraint_basis(const Eigen::VectorXd& c);

/// Smallest eigenvalue of A restricted to c^T v = 0, computed densely.
double constrained_min_eigenvalue(const SparseMatrix& a, const Eigen::VectorXd& c);

}  // namespace tracefem
