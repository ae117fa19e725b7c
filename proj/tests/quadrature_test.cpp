#include "tracefem/quadrature.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "power_sum.hpp"
#include "tracefem/error.hpp"

namespace tracefem {
namespace {

using Vec = Eigen::Vector3d;

using testing::PowerSum;
using testing::random_point;
using testing::random_polynomial;

TEST(GaussSegment, BasicIntegrals) {
  const auto r3 = gauss_segment(3);
  EXPECT_EQ(r3.points.size(), 2u);
  double cube = 0.0, one = 0.0;
  for (std::size_t q = 0; q < r3.points.size(); ++q) {
    cube += r3.weights[q] * std::pow(r3.points[q], 3);
    one += r3.weights[q];
  }
  EXPECT_NEAR(cube, 0.25, 1e-15);
  EXPECT_NEAR(one, 1.0, 1e-15);

  const auto r5 = gauss_segment(5);
  double sixth = 0.0;
  for (std::size_t q = 0; q < r5.points.size(); ++q) sixth += r5.weights[q] * std::pow(r5.points[q], 6);
  EXPECT_GT(std::abs(sixth - 1.0 / 7.0), 1e-6);
}

TEST(GaussSegment, PointCountsAndErrors) {
  for (int d = 0; d <= 11; ++d) EXPECT_EQ(gauss_segment(d).points.size(), std::size_t(std::max(1, (d + 2) / 2)));
  EXPECT_THROW(gauss_segment(12), PreconditionError);
  EXPECT_THROW(gauss_segment(-1), PreconditionError);
}

TEST(GaussSegment, RandomPolynomialExactness) {
  std::mt19937 rng(7);
  for (int d = 0; d <= 11; ++d) {
    const auto rule = gauss_segment(d);
    for (int trial = 0; trial < 5; ++trial) {
      const PowerSum f = random_polynomial(d, rng);
      const Vec a = random_point(rng), b = random_point(rng);
      double sum = 0.0;
      for (const auto& q : segment_points(a, b, rule)) sum += q.weight * f(q.x);
      const double exact = f.segment_integral(a, b);
      EXPECT_NEAR(sum, exact, 1e-12 * std::max(1.0, std::abs(exact))) << "degree " << d;
    }
  }
}

TEST(GaussTriangle, WeightsAndMonomial) {
  for (int d : {1, 2, 4, 6, 8}) {
    const auto r = gauss_triangle(d);
    double sum = 0.0;
    for (double w : r.weights) {
      EXPECT_GT(w, 0.0);
      sum += w;
    }
    EXPECT_NEAR(sum, 0.5, 1e-15);
    for (const auto& p : r.points) {
      EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-15);
      for (double l : p) EXPECT_GE(l, 0.0);
    }
  }
  const auto r = gauss_triangle(4);
  double m = 0.0;
  for (std::size_t q = 0; q < r.points.size(); ++q)
    m += r.weights[q] * std::pow(r.points[q][0], 2) * std::pow(r.points[q][1], 2);
  EXPECT_NEAR(m, 1.0 / 180.0, 1e-16);
  EXPECT_THROW(gauss_triangle(3), PreconditionError);
  EXPECT_THROW(gauss_triangle(10), PreconditionError);
}

TEST(GaussTriangle, RandomPolynomialExactness) {
  std::mt19937 rng(11);
  for (int d : {1, 2, 4, 6, 8}) {
    const auto rule = gauss_triangle(d);
    for (int trial = 0; trial < 10; ++trial) {
      const PowerSum f = random_polynomial(d, rng);
      const Vec a = random_point(rng), b = random_point(rng), c = random_point(rng);
      std::vector<WeightedPoint> pts;
      map_triangle(a, b, c, rule, pts);
      double sum = 0.0;
      for (const auto& q : pts) sum += q.weight * f(q.x);
      const double exact = f.triangle_integral(a, b, c);
      EXPECT_NEAR(sum, exact, 1e-12 * std::max(1.0, std::abs(exact))) << "degree " << d;
    }
  }
}

TEST(Polygon, TriangleArea) {
  const std::array<Vec, 3> tri = {Vec(0.5, 0, 0), Vec(0, 0.5, 0), Vec(0, 0, 0.5)};
  const double area = integrate_polygon(tri, [](const Vec&) { return 1.0; }, gauss_triangle(1));
  EXPECT_NEAR(area, std::sqrt(3.0) / 8.0, 1e-16);
}

TEST(Polygon, DegenerateIsZero) {
  const std::array<Vec, 3> tri = {Vec(0, 0, 0), Vec(1, 1, 1), Vec(2, 2, 2)};
  EXPECT_EQ(integrate_polygon(tri, [](const Vec&) { return 1.0; }, gauss_triangle(2)), 0.0);
}

TEST(Polygon, QuadrilateralExactnessAndFanConsistency) {
  std::mt19937 rng(3);
  // planar convex quad: points on an ellipse in a random plane
  const Vec o = random_point(rng);
  const Vec e1 = random_point(rng).normalized();
  const Vec e2 = e1.cross(random_point(rng)).normalized();
  std::array<Vec, 4> quad;
  const double angles[4] = {0.1, 1.7, 3.0, 4.6};
  for (int k = 0; k < 4; ++k) quad[k] = o + 0.8 * std::cos(angles[k]) * e1 + 0.5 * std::sin(angles[k]) * e2;

  for (int d : {1, 2, 4, 6, 8}) {
    const PowerSum f = random_polynomial(d, rng);
    const auto g = [&](const Vec& x) { return f(x); };
    const double exact = f.triangle_integral(quad[0], quad[1], quad[2]) +
                         f.triangle_integral(quad[0], quad[2], quad[3]);
    const double fan0 = integrate_polygon(quad, g, gauss_triangle(d), 0);
    const double fan1 = integrate_polygon(quad, g, gauss_triangle(d), 1);
    EXPECT_NEAR(fan0, exact, 1e-12 * std::max(1.0, std::abs(exact)));
    EXPECT_NEAR(fan0, fan1, 1e-13 * std::max(1.0, std::abs(exact)));
  }

  // linear integrand = area times the value at the area centroid
  const double a1 = 0.5 * (quad[1] - quad[0]).cross(quad[2] - quad[0]).norm();
  const double a2 = 0.5 * (quad[2] - quad[0]).cross(quad[3] - quad[0]).norm();
  const Vec centroid = (a1 * (quad[0] + quad[1] + quad[2]) + a2 * (quad[0] + quad[2] + quad[3])) / (3 * (a1 + a2));
  const Vec slope(0.3, -1.2, 2.0);
  const double lin = integrate_polygon(quad, [&](const Vec& x) { return 1.0 + slope.dot(x); }, gauss_triangle(1));
  EXPECT_NEAR(lin, (a1 + a2) * (1.0 + slope.dot(centroid)), 1e-14);
}

}  // namespace
}  // namespace tracefem
