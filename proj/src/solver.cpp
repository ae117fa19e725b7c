#include "tracefem/solver.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/CholmodSupport>
#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace tracefem {

namespace {

constexpr int kDenseLimit = 2000;

class Projector {
 public:
  explicit Projector(const Eigen::VectorXd& c) : c_(c), inv_norm2_(1.0 / c.squaredNorm()) {}
  void apply(Eigen::VectorXd& v) const { v -= (c_.dot(v) * inv_norm2_) * c_; }

 private:
  const Eigen::VectorXd& c_;
  double inv_norm2_;
};

double violation(const Eigen::VectorXd& c, const Eigen::VectorXd& u) {
  const double nu = u.norm();
  return nu == 0.0 ? 0.0 : std::abs(c.dot(u)) / (c.norm() * nu);
}

// z = inverse(diag A) r.
class JacobiPreconditioner {
 public:
  explicit JacobiPreconditioner(const SparseMatrix& a) : inv_diag_(a.diagonal()) {
    for (auto& d : inv_diag_) d = d > 0.0 ? 1.0 / d : 1.0;
  }
  void apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const { z = inv_diag_.cwiseProduct(r); }

 private:
  Eigen::VectorXd inv_diag_;
};

// Inverse of P A on the constraint subspace, built from a Cholesky factor of
// A with one row and column removed (positive definite when the kernel of A
// is spanned by the constants; otherwise a preconditioner only). For r with c.r = 0: solve A z = r + mu c with
// mu chosen so the right-hand side sums to zero, then shift z by a constant
// so that c.z = 0.
class PinnedCholesky {
 public:
  PinnedCholesky(const SparseMatrix& a, const Eigen::VectorXd& c)
      : n_(a.rows()), c_(c), c_sum_(c.sum()) {
    if (c_sum_ == 0.0) throw PreconditionError("solve_constrained: c sums to zero");
    c.cwiseAbs().maxCoeff(&pin_);
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(a.nonzeros() / 2 + n_);
    const auto& row_ptr = a.row_ptr();
    const auto& cols = a.cols();
    const auto& vals = a.values();
    for (int i = 0; i < n_; ++i) {
      if (i == pin_) continue;
      for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
        const int j = cols[k];
        if (j >= i && j != pin_) entries.emplace_back(reduce(i), reduce(j), vals[k]);
      }
    }
    Eigen::SparseMatrix<double> reduced(n_ - 1, n_ - 1);
    reduced.setFromTriplets(entries.begin(), entries.end());
    entries = {};
    llt_.cholmod().print = 0;
    llt_.cholmod().quick_return_if_not_posdef = 1;
    llt_.compute(reduced);
    // Singular beyond the constants (a consistent system can still be
    // solved): factor a slightly shifted matrix instead.
    const double scale = reduced.diagonal().cwiseAbs().maxCoeff();
    for (double shift = 1e-12; llt_.info() != Eigen::Success && shift <= 1e-6; shift *= 100.0) {
      Eigen::SparseMatrix<double> shifted = reduced;
      shifted.diagonal().array() += shift * scale;
      llt_.compute(shifted);
    }
    if (llt_.info() != Eigen::Success)
      throw Error("solve_constrained: Cholesky factorization failed (matrix not positive semidefinite)");
  }

  void apply(const Eigen::VectorXd& r, Eigen::VectorXd& z) const {
    const Eigen::VectorXd rhs = r - (r.sum() / c_sum_) * c_;
    Eigen::VectorXd rr(n_ - 1);
    rr << rhs.head(pin_), rhs.tail(n_ - pin_ - 1);
    const Eigen::VectorXd zz = llt_.solve(rr);
    z.resize(n_);
    z << zz.head(pin_), 0.0, zz.tail(n_ - pin_ - 1);
    z.array() -= c_.dot(z) / c_sum_;
  }

 private:
  int reduce(int i) const { return i < pin_ ? i : i - 1; }

  int n_;
  const Eigen::VectorXd& c_;
  double c_sum_;
  Eigen::Index pin_ = 0;
  Eigen::CholmodSupernodalLLT<Eigen::SparseMatrix<double>, Eigen::Upper> llt_;
};

std::string format_residual(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", r);
  return buf;
}

template <class Preconditioner>
SolveResult projected_cg(const SparseMatrix& a, const Eigen::VectorXd& b,
                         const Eigen::VectorXd& c, double tol, int max_iter,
                         const Preconditioner& pre) {
  const int n = a.rows();
  const Projector proj(c);
  SolveResult result;
  result.u = Eigen::VectorXd::Zero(n);

  Eigen::VectorXd pb = b;
  proj.apply(pb);
  const double norm_b = pb.norm();
  if (norm_b == 0.0) return result;

  auto& u = result.u;
  Eigen::VectorXd r = pb, z(n), p(n), q(n);
  pre.apply(r, z);
  proj.apply(z);
  p = z;
  double rz = r.dot(z);
  double res = 1.0;
  int it = 0;
  while (it < max_iter) {
    a.multiply(p, q);
    proj.apply(q);
    const double alpha = rz / p.dot(q);
    u += alpha * p;
    r -= alpha * q;
    ++it;
    res = r.norm() / norm_b;
    if (res <= tol) break;
    pre.apply(r, z);
    proj.apply(z);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  proj.apply(u);
  r = b - a * u;
  proj.apply(r);

  result.report = {it, res, r.norm() / norm_b, violation(c, u)};
  if (res > tol)
    throw NonConvergence("solve_constrained: no convergence after " + std::to_string(it) +
                             " iterations (residual " + format_residual(res) + ")",
                         result.report);
  return result;
}

}  // namespace

SolveResult solve_constrained(const SparseMatrix& a, const Eigen::VectorXd& b,
                              const Eigen::VectorXd& c, double tol, int max_iter,
                              Preconditioner preconditioner) {
  const int n = a.rows();
  if (b.size() != n || c.size() != n) throw PreconditionError("solve_constrained: size mismatch");
  if (!(tol > 0.0)) throw PreconditionError("solve_constrained: tol must be > 0");
  if (a.max_asymmetry() > 1e-12 * a.max_abs()) throw PreconditionError("solve_constrained: matrix is not symmetric");
  if (max_iter <= 0) max_iter = 50 * n;

  if (preconditioner == Preconditioner::cholesky && n > 1)
    return projected_cg(a, b, c, tol, max_iter, PinnedCholesky(a, c));
  return projected_cg(a, b, c, tol, max_iter, JacobiPreconditioner(a));
}

Eigen::VectorXd solve_bordered_dense(const SparseMatrix& a, const Eigen::VectorXd& b,
                                     const Eigen::VectorXd& c) {
  const int n = a.rows();
  if (n > kDenseLimit) throw PreconditionError("solve_bordered_dense: ndof above dense limit");
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n + 1, n + 1);
  k.topLeftCorner(n, n) = a.to_dense();
  k.block(0, n, n, 1) = c;
  k.block(n, 0, 1, n) = c.transpose();
  Eigen::VectorXd rhs(n + 1);
  rhs.head(n) = b;
  // consistent right-hand side: the multiplier absorbs the c-component of b
  rhs[n] = 0.0;
  const Eigen::VectorXd x = k.partialPivLu().solve(rhs);
  return x.head(n);
}

Eigen::MatrixXd constraint_basis(const Eigen::VectorXd& c) {
  const int n = static_cast<int>(c.size());
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(c);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return q.rightCols(n - 1);
}

double constrained_min_eigenvalue(const SparseMatrix& a, const Eigen::VectorXd& c) {
  if (a.rows() > kDenseLimit) throw PreconditionError("constrained_min_eigenvalue: ndof above dense limit");
  const Eigen::MatrixXd q = constraint_basis(c);
  const Eigen::MatrixXd reduced = q.transpose() * a.to_dense() * q;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reduced, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()[0];
}

}  // namespace tracefem
