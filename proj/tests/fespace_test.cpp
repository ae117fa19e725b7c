#include "tracefem/fespace.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "support.hpp"
#include "tracefem/error.hpp"

namespace tracefem {
namespace {

// Complex made of the given tets, all active (only what the space needs).
CutComplex tets_complex(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> tets) {
  auto mesh = std::make_shared<BackgroundMesh>();
  mesh->vertices = std::move(vertices);
  mesh->tets = std::move(tets);
  CutComplex cx;
  for (int t = 0; t < static_cast<int>(mesh->tets.size()); ++t) cx.active_tets.push_back(t);
  cx.background = mesh;
  return cx;
}

const std::array<Vec3, 4> kTet = {Vec3(0.1, 0.0, 0.2), Vec3(1.0, 0.2, 0.0), Vec3(0.3, 0.9, 0.1),
                                  Vec3(0.2, 0.3, 1.1)};

std::array<Vec3, 10> nodes(const std::array<Vec3, 4>& v) {
  std::array<Vec3, 10> x;
  for (int i = 0; i < 4; ++i) x[i] = v[i];
  for (int e = 0; e < 6; ++e) x[4 + e] = 0.5 * (v[kTetEdges[e][0]] + v[kTetEdges[e][1]]);
  return x;
}

Vec3 random_inside(std::mt19937& rng, const std::array<Vec3, 4>& v) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double l[4], s = 0.0;
  for (double& x : l) s += x = u(rng);
  Vec3 p = Vec3::Zero();
  for (int i = 0; i < 4; ++i) p += l[i] / s * v[i];
  return p;
}

TEST(P2Space, DofCounts) {
  const auto one = build_p2_space(tets_complex({kTet.begin(), kTet.end()}, {{0, 1, 2, 3}}));
  EXPECT_EQ(one.ndof, 10);
  std::vector<Vec3> v(kTet.begin(), kTet.end());
  v.push_back(Vec3(1.0, 1.0, 1.0));
  const auto two = build_p2_space(tets_complex(v, {{0, 1, 2, 3}, {1, 2, 3, 4}}));
  EXPECT_EQ(two.ndof, 14);
  EXPECT_EQ(two.vertex_dofs.size(), 5u);
  EXPECT_EQ(two.edge_dofs.size(), 9u);
  // shared face: three vertex dofs and three edge dofs coincide
  int shared = 0;
  for (int a : two.tet_dofs[0])
    for (int b : two.tet_dofs[1]) shared += a == b;
  EXPECT_EQ(shared, 6);
}

TEST(P2Space, DeterministicNumbering) {
  const auto level = testing::sphere_level(6);
  const auto again = build_p2_space(level.complex);
  EXPECT_EQ(again.tet_dofs, level.space.tet_dofs);
  EXPECT_EQ(again.vertex_dofs, level.space.vertex_dofs);
  EXPECT_EQ(again.edge_dofs, level.space.edge_dofs);
  EXPECT_EQ(level.space.ndof,
            static_cast<int>(level.space.vertex_dofs.size() + level.space.edge_dofs.size()));
}

TEST(P2Basis, NodalProperty) {
  const P2Basis basis(kTet);
  const auto x = nodes(kTet);
  for (int node = 0; node < 10; ++node) {
    const auto v = basis.eval(x[node]);
    for (int k = 0; k < 10; ++k) EXPECT_NEAR(v.value[k], k == node ? 1.0 : 0.0, 1e-14);
  }
}

TEST(P2Basis, PartitionOfUnity) {
  const P2Basis basis(kTet);
  std::mt19937 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto v = basis.eval(random_inside(rng, kTet));
    double s = 0.0;
    Vec3 g = Vec3::Zero();
    Mat3 h = Mat3::Zero();
    for (int k = 0; k < 10; ++k) {
      s += v.value[k];
      g += v.gradient[k];
      h += basis.hessians()[k];
    }
    EXPECT_NEAR(s, 1.0, 1e-14);
    EXPECT_LT(g.norm(), 1e-13);
    EXPECT_LT(h.norm(), 1e-12);
  }
}

TEST(P2Basis, QuadraticReproduction) {
  const auto q = [](const Vec3& x) { return x[0] * x[0] + 3 * x[0] * x[1] - x[2] + 2.0; };
  const auto grad = [](const Vec3& x) { return Vec3(2 * x[0] + 3 * x[1], 3 * x[0], -1.0); };
  Mat3 hess;
  hess << 2, 3, 0, 3, 0, 0, 0, 0, 0;
  const P2Basis basis(kTet);
  const auto x = nodes(kTet);
  Mat3 h = Mat3::Zero();
  for (int k = 0; k < 10; ++k) h += q(x[k]) * basis.hessians()[k];
  EXPECT_LT((h - hess).norm(), 1e-12);

  std::mt19937 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    // evaluation outside the tet is allowed (polynomial extension)
    const Vec3 p = random_inside(rng, kTet) * (trial % 2 ? 1.0 : 1.7);
    const auto v = basis.eval(p);
    double value = 0.0;
    Vec3 g = Vec3::Zero();
    for (int k = 0; k < 10; ++k) {
      value += q(x[k]) * v.value[k];
      g += q(x[k]) * v.gradient[k];
    }
    EXPECT_NEAR(value, q(p), 1e-13);
    EXPECT_LT((g - grad(p)).norm(), 1e-12);
  }
}

TEST(P2Basis, DegenerateTet) {
  EXPECT_THROW(P2Basis({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 1, 0)}),
               PreconditionError);
}

TEST(P2Space, ContinuityAcrossFacets) {
  const auto level = testing::sphere_level(8);
  const auto& cx = level.complex;
  const Eigen::VectorXd u = testing::random_vector(level.space.ndof, 4);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double worst = 0.0, gradient_jump = 0.0;
  for (const auto& f : cx.facets) {
    const P2Basis bp = tet_basis(cx, f.plus), bm = tet_basis(cx, f.minus);
    const auto& dp = level.space.tet_dofs[f.plus];
    const auto& dm = level.space.tet_dofs[f.minus];
    double a = dist(rng), b = dist(rng);
    if (a + b > 1.0) a = 1.0 - a, b = 1.0 - b;
    const Vec3 x = f.vertices[0] + a * (f.vertices[1] - f.vertices[0]) + b * (f.vertices[2] - f.vertices[0]);
    const auto vp = bp.eval(x), vm = bm.eval(x);
    double up = 0.0, um = 0.0;
    Vec3 gp = Vec3::Zero(), gm = Vec3::Zero();
    for (int k = 0; k < 10; ++k) {
      up += u[dp[k]] * vp.value[k];
      um += u[dm[k]] * vm.value[k];
      gp += u[dp[k]] * vp.gradient[k];
      gm += u[dm[k]] * vm.gradient[k];
    }
    worst = std::max(worst, std::abs(up - um));
    gradient_jump = std::max(gradient_jump, (gp - gm).norm());
  }
  EXPECT_LE(worst, 1e-11);
  EXPECT_GT(gradient_jump, 1e-3);
}

TEST(P2Space, MeanVectorSumsToArea) {
  const auto level = testing::sphere_level(8);
  const Eigen::VectorXd c = mean_vector(level.space, level.complex, gauss_triangle(2));
  const double area = level.complex.surface_area();
  EXPECT_NEAR(c.sum(), area, 1e-12 * area);
  const Eigen::VectorXd one = interpolate(level.space, level.complex, [](const Vec3&) { return 1.0; });
  EXPECT_NEAR(c.dot(one), area, 1e-12 * area);
  const Eigen::VectorXd c6 = mean_vector(level.space, level.complex, gauss_triangle(6));
  EXPECT_LT((c - c6).lpNorm<Eigen::Infinity>(), 1e-15 * c.size());
  EXPECT_THROW(mean_vector(level.space, level.complex, gauss_triangle(1)), PreconditionError);
}

TEST(P2Space, InterpolationAtDofPoints) {
  const auto level = testing::sphere_level(4);
  const auto pts = dof_points(level.space, level.complex);
  ASSERT_EQ(static_cast<int>(pts.size()), level.space.ndof);
  const Eigen::VectorXd v = interpolate(level.space, level.complex, [](const Vec3& x) { return x[1]; });
  for (int i = 0; i < level.space.ndof; ++i) EXPECT_DOUBLE_EQ(v[i], pts[i][1]);
}

}  // namespace
}  // namespace tracefem
