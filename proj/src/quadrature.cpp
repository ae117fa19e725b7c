#include "tracefem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tracefem/error.hpp"

namespace tracefem {

namespace {

// Orbit generators for symmetric triangle rules. Weights here are normalized
// to sum to one and scaled by 1/2 when the rule is built.
void add_centroid(TriangleRule& r, double w) {
  r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  r.weights.push_back(0.5 * w);
}

void add_s21(TriangleRule& r, double w, double a) {
  const double b = 1.0 - 2.0 * a;
  for (const auto& p : {std::array{a, a, b}, std::array{a, b, a}, std::array{b, a, a}}) {
    r.points.push_back(p);
    r.weights.push_back(0.5 * w);
  }
}

void add_s111(TriangleRule& r, double w, double a, double b) {
  const double c = 1.0 - a - b;
  for (const auto& p : {std::array{a, b, c}, std::array{a, c, b}, std::array{b, a, c},
                        std::array{b, c, a}, std::array{c, a, b}, std::array{c, b, a}}) {
    r.points.push_back(p);
    r.weights.push_back(0.5 * w);
  }
}

}  // namespace

SegmentRule gauss_segment(int degree) {
  if (degree < 0 || degree > 11)
    throw PreconditionError("gauss_segment: unsupported degree " + std::to_string(degree));
  const int n = std::max(1, (degree + 2) / 2);
  SegmentRule rule;
  rule.degree = 2 * n - 1;
  // Newton iteration on P_n from the Chebyshev-like initial guesses.
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points.push_back(0.5 * (1.0 - x));
    rule.weights.push_back(0.5 * w);
  }
  return rule;
}

TriangleRule gauss_triangle(int degree) {
  TriangleRule r;
  r.degree = degree;
  switch (degree) {
    case 1:
      add_centroid(r, 1.0);
      break;
    case 2:
      add_s21(r, 1.0 / 3.0, 1.0 / 6.0);
      break;
    case 4:
      add_s21(r, 0.2233815896780114657, 0.44594849091596488632);
      add_s21(r, 0.10995174365532186764, 0.09157621350977074346);
      break;
    case 6:
      add_s21(r, 0.11678627572637936603, 0.24928674517091042129);
      add_s21(r, 0.050844906370206816921, 0.06308901449150222834);
      add_s111(r, 0.082851075618373575194, 0.053145049844816947353,
               0.31035245103378440542);
      break;
    case 8:
      add_centroid(r, 0.14431560767778716825);
      add_s21(r, 0.095091634267284624794, 0.45929258829272315603);
      add_s21(r, 0.10321737053471825028, 0.17056930775176020662);
      add_s21(r, 0.032458497623198080311, 0.050547228317030975458);
      add_s111(r, 0.027230314174434994265, 0.0083947774099576053372,
               0.26311282963463811342);
      break;
    default:
      throw PreconditionError("gauss_triangle: unsupported degree " + std::to_string(degree));
  }
  return r;
}

void map_triangle(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                  const Eigen::Vector3d& c, const TriangleRule& rule,
                  std::vector<WeightedPoint>& out) {
  const double area = 0.5 * (b - a).cross(c - a).norm();
  if (area == 0.0) return;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const auto& l = rule.points[q];
    out.push_back({l[0] * a + l[1] * b + l[2] * c, 2.0 * area * rule.weights[q]});
  }
}

std::vector<WeightedPoint> polygon_points(std::span<const Eigen::Vector3d> vertices,
                                          const TriangleRule& rule, int first) {
  std::vector<WeightedPoint> out;
  const int n = static_cast<int>(vertices.size());
  if (n < 3) return out;
  out.reserve((n - 2) * rule.points.size());
  const auto& v0 = vertices[first % n];
  for (int k = 1; k + 1 < n; ++k)
    map_triangle(v0, vertices[(first + k) % n], vertices[(first + k + 1) % n], rule, out);
  return out;
}

std::vector<WeightedPoint> segment_points(const Eigen::Vector3d& a,
                                          const Eigen::Vector3d& b,
                                          const SegmentRule& rule) {
  std::vector<WeightedPoint> out;
  const double len = (b - a).norm();
  out.reserve(rule.points.size());
  for (std::size_t q = 0; q < rule.points.size(); ++q)
    out.push_back({a + rule.points[q] * (b - a), len * rule.weights[q]});
  return out;
}

double integrate_polygon(std::span<const Eigen::Vector3d> vertices,
                         const std::function<double(const Eigen::Vector3d&)>& integrand,
                         const TriangleRule& rule, int first) {
  double sum = 0.0;
  for (const auto& p : polygon_points(vertices, rule, first)) sum += p.weight * integrand(p.x);
  return sum;
}

}  // namespace tracefem
