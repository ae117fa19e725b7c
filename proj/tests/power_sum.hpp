#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace tracefem::testing {

using Vec = Eigen::Vector3d;

// Random polynomial as a sum of powers of affine forms: every polynomial of
// degree <= d is such a sum, and each term has a closed-form simplex integral.
struct PowerSum {
  struct Term {
    double coef;
    Vec a;
    double b;
    int power;
  };
  std::vector<Term> terms;

  double operator()(const Vec& x) const {
    double s = 0.0;
    for (const auto& t : terms) s += t.coef * std::pow(t.a.dot(x) + t.b, t.power);
    return s;
  }

  // int_T L^k = 2|T| k!/(k+2)! sum_{i+j+l=k} La^i Lb^j Lc^l
  double triangle_integral(const Vec& p, const Vec& q, const Vec& r) const {
    const double area = 0.5 * (q - p).cross(r - p).norm();
    double s = 0.0;
    for (const auto& t : terms) {
      const double la = t.a.dot(p) + t.b, lb = t.a.dot(q) + t.b, lc = t.a.dot(r) + t.b;
      double h = 0.0;
      for (int i = 0; i <= t.power; ++i)
        for (int j = 0; i + j <= t.power; ++j)
          h += std::pow(la, i) * std::pow(lb, j) * std::pow(lc, t.power - i - j);
      s += t.coef * 2.0 * area * h / ((t.power + 1.0) * (t.power + 2.0));
    }
    return s;
  }

  // int_[p,q] L^k = |q - p| / (k + 1) sum_{i+j=k} Lp^i Lq^j
  double segment_integral(const Vec& p, const Vec& q) const {
    double s = 0.0;
    for (const auto& t : terms) {
      const double lp = t.a.dot(p) + t.b, lq = t.a.dot(q) + t.b;
      double h = 0.0;
      for (int i = 0; i <= t.power; ++i) h += std::pow(lp, i) * std::pow(lq, t.power - i);
      s += t.coef * (q - p).norm() * h / (t.power + 1.0);
    }
    return s;
  }
};

inline PowerSum random_polynomial(int degree, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PowerSum f;
  for (int k = 0; k < 6; ++k)
    for (int p = 0; p <= degree; ++p) f.terms.push_back({u(rng), Vec(u(rng), u(rng), u(rng)), u(rng), p});
  return f;
}

inline Vec random_point(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {u(rng), u(rng), u(rng)};
}

}  // namespace tracefem::testing
