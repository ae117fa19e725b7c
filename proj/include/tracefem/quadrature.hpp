#pragma once

/// \file quadrature.hpp
/// Gauss rules on the unit interval and on the reference triangle, and
/// integration over planar polygons by fan triangulation.

#include <array>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace tracefem {

/// Gauss-Legendre rule on [0, 1]; weights sum to 1.
struct SegmentRule {
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Symmetric rule on the reference triangle in barycentric coordinates;
/// weights sum to 1/2 (the reference area).
struct TriangleRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;
};

/// ceil((degree + 1) / 2)-point Gauss-Legendre rule, degree <= 11.
SegmentRule gauss_segment(int degree);

/// Symmetric rules of degree 1, 2, 4, 6 and 8 (1, 3, 6, 12, 16 points).
TriangleRule gauss_triangle(int degree);

/// A physical quadrature point with its weight (area or length measure
/// already included).
struct WeightedPoint {
  Eigen::Vector3d x;
  double weight;
};

/// Maps `rule` onto the triangle (a, b, c).
void map_triangle(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                  const Eigen::Vector3d& c, const TriangleRule& rule,
                  std::vector<WeightedPoint>& out);

/// Quadrature points of a planar polygon, fan-triangulated from `first`.
std::vector<WeightedPoint> polygon_points(std::span<const Eigen::Vector3d> vertices,
                                          const TriangleRule& rule, int first = 0);

/// Quadrature points on the segment [a, b].
std::vector<WeightedPoint> segment_points(const Eigen::Vector3d& a,
                                          const Eigen::Vector3d& b,
                                          const SegmentRule& rule);

/// Integral over a planar polygon with 3 or 4 vertices; 0 for degenerate ones.
double integrate_polygon(std::span<const Eigen::Vector3d> vertices,
                         const std::function<double(const Eigen::Vector3d&)>& integrand,
                         const TriangleRule& rule, int first = 0);

}  // namespace tracefem
