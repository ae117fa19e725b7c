#include "tracefem/solver.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "support.hpp"

namespace tracefem {
namespace {

SparseMatrix identity(int n) {
  std::vector<std::size_t> row_ptr(n + 1);
  std::vector<int> cols(n);
  for (int i = 0; i < n; ++i) {
    row_ptr[i + 1] = i + 1;
    cols[i] = i;
  }
  SparseMatrix a = SparseMatrix::from_pattern(n, row_ptr, cols);
  for (auto& v : a.values()) v = 1.0;
  return a;
}

struct SphereSystem {
  LevelProblem level;
  SparseMatrix a;
  Eigen::VectorXd b, c;
};

const SphereSystem& sphere_system() {
  static const SphereSystem s = [] {
    SphereSystem s{testing::sphere_level(6), {}, {}, {}};
    s.a = assemble_system(s.level.space, s.level.complex, s.level.params);
    s.b = assemble_rhs(s.level.space, s.level.complex, *exact_data().f);
    s.c = mean_vector(s.level.space, s.level.complex, gauss_triangle(2));
    return s;
  }();
  return s;
}

const Preconditioner kBoth[] = {Preconditioner::jacobi, Preconditioner::cholesky};

TEST(SolveConstrained, ZeroRightHandSide) {
  const auto& s = sphere_system();
  for (auto pc : kBoth) {
    const auto r = solve_constrained(s.a, Eigen::VectorXd::Zero(s.a.rows()), s.c, 1e-10, 0, pc);
    EXPECT_EQ(r.report.iterations, 0);
    EXPECT_EQ(r.u.lpNorm<Eigen::Infinity>(), 0.0);
  }
}

TEST(SolveConstrained, IdentityGivesProjection) {
  const int n = 50;
  const Eigen::VectorXd b = testing::random_vector(n, 1);
  const Eigen::VectorXd c = testing::random_vector(n, 2).cwiseAbs();
  const Eigen::VectorXd expected = b - c * (c.dot(b) / c.squaredNorm());
  const auto r = solve_constrained(identity(n), b, c, 1e-12);
  EXPECT_LT((r.u - expected).norm(), 1e-11 * expected.norm());
  EXPECT_LE(r.report.iterations, 2);
}

TEST(SolveConstrained, MatchesDenseBorderedSolve) {
  const auto& s = sphere_system();
  ASSERT_LE(s.a.rows(), 2000);
  const Eigen::VectorXd dense = solve_bordered_dense(s.a, s.b, s.c);
  for (auto pc : kBoth) {
    const auto r = solve_constrained(s.a, s.b, s.c, 1e-10, 0, pc);
    EXPECT_LE(r.report.residual, 1e-10);
    EXPECT_LE(r.report.constraint_violation, 1e-12);
    EXPECT_LE((r.u - dense).norm(), 1e-8 * dense.norm());
    EXPECT_LE(std::abs(s.c.dot(r.u)), 1e-12 * s.c.norm() * r.u.norm());
  }
}

TEST(SolveConstrained, ShiftAlongConstraintIsIgnored) {
  const auto& s = sphere_system();
  const auto base = solve_constrained(s.a, s.b, s.c, 1e-10, 0, Preconditioner::cholesky);
  const auto shifted = solve_constrained(s.a, s.b + 3.7 * s.c, s.c, 1e-10, 0, Preconditioner::cholesky);
  EXPECT_LE((base.u - shifted.u).norm(), 1e-9 * base.u.norm());
}

TEST(SolveConstrained, Errors) {
  const auto& s = sphere_system();
  EXPECT_THROW(solve_constrained(s.a, s.b.head(10), s.c), PreconditionError);
  EXPECT_THROW(solve_constrained(s.a, s.b, s.c, 0.0), PreconditionError);

  SparseMatrix skew = SparseMatrix::from_pattern(3, {0, 2, 3, 4}, {0, 1, 1, 2});
  skew.values() = {1.0, 0.5, 1.0, 1.0};
  EXPECT_THROW(solve_constrained(skew, Eigen::VectorXd::Ones(3), Eigen::VectorXd::Ones(3)),
               PreconditionError);

  try {
    solve_constrained(s.a, s.b, s.c, 1e-10, 3, Preconditioner::jacobi);
    FAIL() << "expected NonConvergence";
  } catch (const NonConvergence& e) {
    EXPECT_EQ(e.report().iterations, 3);
    EXPECT_GT(e.report().residual, 1e-10);
  }
}

TEST(ConstrainedSpectrum, CoerciveWithGradientJumps) {
  const auto& s = sphere_system();
  for (int variant = 0; variant < 2; ++variant) {
    FormParams p = s.level.params;
    p.variant = variant;
    const SparseMatrix a = assemble_system(s.level.space, s.level.complex, p);
    EXPECT_GT(constrained_min_eigenvalue(a, s.c), 1e-3) << "variant " << variant;
  }
}

// Without gradient jumps the P1 interpolant of the level set (zero on the
// discrete surface, no Hessian anywhere) is an extra kernel vector.
Eigen::VectorXd levelset_interpolant(const LevelProblem& level) {
  const auto& phi = level.complex.levelset;
  Eigen::VectorXd v(level.space.ndof);
  const int nv = static_cast<int>(level.space.vertex_dofs.size());
  for (int i = 0; i < nv; ++i) v[i] = phi[level.space.vertex_dofs[i]];
  for (std::size_t e = 0; e < level.space.edge_dofs.size(); ++e) {
    const auto [p, q] = level.space.edge_dofs[e];
    v[nv + static_cast<int>(e)] = 0.5 * (phi[p] + phi[q]);
  }
  return v;
}

TEST(ConstrainedSpectrum, HessianOnlyKernelIsTheLevelSet) {
  const auto& s = sphere_system();
  FormParams p = s.level.params;
  p.variant = 2;
  const SparseMatrix a = assemble_system(s.level.space, s.level.complex, p);
  const Eigen::VectorXd phi = levelset_interpolant(s.level);
  const double scale = a.to_dense().cwiseAbs().maxCoeff();
  EXPECT_LT((a * phi).norm(), 1e-10 * scale * phi.norm());
  EXPECT_LT(std::abs(s.c.dot(phi)), 1e-12 * s.c.norm() * phi.norm());
  EXPECT_LT(std::abs(s.b.dot(phi)), 1e-12 * s.b.norm() * phi.norm());

  // and nothing else: the spectrum on {c, phi}-complement stays positive
  const Eigen::MatrixXd q = constraint_basis(s.c);
  Eigen::VectorXd w = q.transpose() * phi;
  w.normalize();
  const Eigen::MatrixXd r = Eigen::MatrixXd::Identity(q.cols(), q.cols()) - w * w.transpose();
  const Eigen::MatrixXd reduced = r * (q.transpose() * a.to_dense() * q) * r + scale * w * w.transpose();
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(reduced).eigenvalues();
  EXPECT_GT(ev[0], 1e-3);
}

TEST(SolveConstrained, HessianOnlySystemIsSolvable) {
  const auto& s = sphere_system();
  FormParams p = s.level.params;
  p.variant = 2;
  const SparseMatrix a = assemble_system(s.level.space, s.level.complex, p);
  for (auto pc : kBoth) {
    const auto r = solve_constrained(a, s.b, s.c, 1e-10, 0, pc);
    EXPECT_LE(r.report.residual, 1e-10);
    EXPECT_LT(r.report.true_residual, 1e-7);
  }
}

TEST(ConstrainedSpectrum, ComplementBasis) {
  const Eigen::VectorXd c = testing::random_vector(30, 8);
  const Eigen::MatrixXd q = constraint_basis(c);
  ASSERT_EQ(q.cols(), 29);
  EXPECT_LT((q.transpose() * q - Eigen::MatrixXd::Identity(29, 29)).norm(), 1e-13);
  EXPECT_LT((q.transpose() * c).norm(), 1e-13);
}

TEST(ConstrainedSpectrum, DenseLimit) {
  const SparseMatrix big = identity(2001);
  EXPECT_THROW(constrained_min_eigenvalue(big, Eigen::VectorXd::Ones(2001)), PreconditionError);
  EXPECT_THROW(solve_bordered_dense(big, Eigen::VectorXd::Ones(2001), Eigen::VectorXd::Ones(2001)),
               PreconditionError);
}

}  // namespace
}  // namespace tracefem
