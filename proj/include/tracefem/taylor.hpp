#pragma once

/// \file taylor.hpp
/// Truncated multivariate Taylor polynomials in three variables.
///
/// A `Taylor<N>` holds the coefficients of the degree-N Taylor expansion of a
/// scalar function around some point x0, i.e. the polynomial
///
///     sum_{|a| <= N} c_a (x - x0)^a,     c_a = D^a f(x0) / a!
///
/// Arithmetic on these objects is forward-mode differentiation to order N:
/// feeding `Taylor<N>` seeds through a generic expression yields all partial
/// derivatives up to order N of that expression, exact up to rounding.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>

#include <Eigen/Core>

namespace tracefem {

namespace detail {

constexpr int monomial_count(int n) { return (n + 1) * (n + 2) * (n + 3) / 6; }

/// Monomials ordered by total degree, then by decreasing x exponent, then by
/// decreasing y exponent.
template <int N>
struct MonomialTable {
  static constexpr int size = monomial_count(N);

  struct Exponent {
    std::uint8_t a, b, c;
  };

  static constexpr std::array<Exponent, size> exponents = [] {
    std::array<Exponent, size> e{};
    int k = 0;
    for (int d = 0; d <= N; ++d)
      for (int a = d; a >= 0; --a)
        for (int b = d - a; b >= 0; --b)
          e[k++] = {static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                    static_cast<std::uint8_t>(d - a - b)};
    return e;
  }();

  static constexpr int index(int a, int b, int c) {
    const int d = a + b + c;
    // offset of degree d block, then position inside it
    int pos = monomial_count(d - 1);
    const int rest = d - a;  // b + c
    // entries with larger x exponent come first: for a' > a there are
    // (d - a' + 1) entries each
    for (int ap = d; ap > a; --ap) pos += d - ap + 1;
    pos += rest - b;
    return pos;
  }

  struct Triple {
    std::uint16_t i, j, k;
  };

  static constexpr int product_count = [] {
    int n = 0;
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) {
        const auto& ei = exponents[i];
        const auto& ej = exponents[j];
        if (ei.a + ei.b + ei.c + ej.a + ej.b + ej.c <= N) ++n;
      }
    return n;
  }();

  static constexpr std::array<Triple, product_count> products = [] {
    std::array<Triple, product_count> t{};
    int n = 0;
    for (int i = 0; i < size; ++i)
      for (int j = 0; j < size; ++j) {
        const auto& ei = exponents[i];
        const auto& ej = exponents[j];
        if (ei.a + ei.b + ei.c + ej.a + ej.b + ej.c <= N)
          t[n++] = {static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j),
                    static_cast<std::uint16_t>(
                        index(ei.a + ej.a, ei.b + ej.b, ei.c + ej.c))};
      }
    return t;
  }();
};

}  // namespace detail

template <int N>
class Taylor {
  static_assert(N >= 0);

 public:
  using Table = detail::MonomialTable<N>;
  static constexpr int order = N;
  static constexpr int size = Table::size;

  constexpr Taylor() : c_{} {}
  constexpr Taylor(double constant) : c_{} { c_[0] = constant; }  // NOLINT

  /// The coordinate function x_axis expanded around `at`.
  static Taylor variable(int axis, double at) {
    Taylor t(at);
    if constexpr (N >= 1) t.c_[1 + axis] = 1.0;
    return t;
  }

  double value() const { return c_[0]; }
  double& operator[](int k) { return c_[k]; }
  double operator[](int k) const { return c_[k]; }
  const std::array<double, size>& coefficients() const { return c_; }

  double coefficient(int a, int b, int c) const {
    return c_[Table::index(a, b, c)];
  }

  /// Partial derivative D^(a,b,c) at the expansion point.
  double derivative(int a, int b, int c) const {
    return coefficient(a, b, c) * factorial(a) * factorial(b) * factorial(c);
  }

  Eigen::Vector3d gradient() const requires(N >= 1) {
    return {c_[1], c_[2], c_[3]};
  }

  Eigen::Matrix3d hessian() const requires(N >= 2) {
    Eigen::Matrix3d h;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        int e[3] = {0, 0, 0};
        ++e[i];
        ++e[j];
        h(i, j) = derivative(e[0], e[1], e[2]);
      }
    return h;
  }

  Taylor& operator+=(const Taylor& o) {
    for (int k = 0; k < size; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Taylor& operator-=(const Taylor& o) {
    for (int k = 0; k < size; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Taylor& operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  Taylor& operator+=(double s) {
    c_[0] += s;
    return *this;
  }
  Taylor& operator-=(double s) {
    c_[0] -= s;
    return *this;
  }
  Taylor& operator*=(const Taylor& o) { return *this = *this * o; }
  Taylor& operator/=(const Taylor& o) { return *this = *this / o; }
  Taylor& operator/=(double s) { return *this *= 1.0 / s; }

  friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
  friend Taylor operator+(Taylor a, double s) { return a += s; }
  friend Taylor operator+(double s, Taylor a) { return a += s; }
  friend Taylor operator-(Taylor a, double s) { return a -= s; }
  friend Taylor operator-(double s, const Taylor& a) { return -a + s; }
  friend Taylor operator*(Taylor a, double s) { return a *= s; }
  friend Taylor operator*(double s, Taylor a) { return a *= s; }
  friend Taylor operator/(Taylor a, double s) { return a /= s; }
  friend Taylor operator/(double s, const Taylor& a) { return s * reciprocal(a); }
  friend Taylor operator/(const Taylor& a, const Taylor& b) {
    return a * reciprocal(b);
  }
  friend Taylor operator-(Taylor a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }

  friend Taylor operator*(const Taylor& a, const Taylor& b) {
    Taylor r;
    for (const auto& t : Table::products) r.c_[t.k] += a.c_[t.i] * b.c_[t.j];
    return r;
  }

  /// g(t) for a univariate g, given g^(k)(t0)/k! for k = 0..N.
  friend Taylor compose_univariate(const Taylor& t,
                                   const std::array<double, N + 1>& scaled) {
    Taylor delta = t;
    delta.c_[0] = 0.0;
    Taylor r(scaled[N]);
    for (int k = N - 1; k >= 0; --k) {
      r = r * delta;
      r.c_[0] += scaled[k];
    }
    return r;
  }

  friend Taylor exp(const Taylor& t) {
    std::array<double, N + 1> s{};
    const double e = std::exp(t.value());
    double f = 1.0;
    for (int k = 0; k <= N; ++k) {
      s[k] = e / f;
      f *= k + 1;
    }
    return compose_univariate(t, s);
  }

  friend Taylor log(const Taylor& t) {
    std::array<double, N + 1> s{};
    const double x = t.value();
    s[0] = std::log(x);
    double p = 1.0;
    for (int k = 1; k <= N; ++k) {
      p /= x;
      s[k] = ((k % 2 == 1) ? 1.0 : -1.0) * p / k;
    }
    return compose_univariate(t, s);
  }

  friend Taylor sin(const Taylor& t) {
    std::array<double, N + 1> s{};
    const double sv = std::sin(t.value()), cv = std::cos(t.value());
    const double cycle[4] = {sv, cv, -sv, -cv};
    double f = 1.0;
    for (int k = 0; k <= N; ++k) {
      s[k] = cycle[k % 4] / f;
      f *= k + 1;
    }
    return compose_univariate(t, s);
  }

  friend Taylor cos(const Taylor& t) {
    std::array<double, N + 1> s{};
    const double sv = std::sin(t.value()), cv = std::cos(t.value());
    const double cycle[4] = {cv, -sv, -cv, sv};
    double f = 1.0;
    for (int k = 0; k <= N; ++k) {
      s[k] = cycle[k % 4] / f;
      f *= k + 1;
    }
    return compose_univariate(t, s);
  }

  /// t^p for real p, via the generalized binomial series (t.value() > 0).
  friend Taylor pow(const Taylor& t, double p) {
    std::array<double, N + 1> s{};
    const double x = t.value();
    double binom = 1.0;
    for (int k = 0; k <= N; ++k) {
      s[k] = binom * std::pow(x, p - k);
      binom *= (p - k) / (k + 1);
    }
    return compose_univariate(t, s);
  }

  friend Taylor sqrt(const Taylor& t) { return pow(t, 0.5); }

  friend Taylor reciprocal(const Taylor& t) {
    std::array<double, N + 1> s{};
    const double inv = 1.0 / t.value();
    double p = inv;
    for (int k = 0; k <= N; ++k) {
      s[k] = (k % 2 == 0) ? p : -p;
      p *= inv;
    }
    return compose_univariate(t, s);
  }

 private:
  static constexpr double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
  }

  std::array<double, size> c_;
};

template <int N>
using TaylorVec = std::array<Taylor<N>, 3>;

/// Coordinate seeds (x0, y0, z0) + identity.
template <int N>
TaylorVec<N> seed(const Eigen::Vector3d& x) {
  return {Taylor<N>::variable(0, x[0]), Taylor<N>::variable(1, x[1]),
          Taylor<N>::variable(2, x[2])};
}

/// Drop all terms above degree M.
template <int M, int N>
Taylor<M> truncate(const Taylor<N>& t) requires(M <= N) {
  Taylor<M> r;
  for (int k = 0; k < Taylor<M>::size; ++k) r[k] = t[k];
  return r;
}

/// Euclidean Laplacian of the expansion, valid to degree N - 2.
template <int N>
Taylor<N - 2> laplacian(const Taylor<N>& t) requires(N >= 2) {
  using Out = detail::MonomialTable<N - 2>;
  using In = detail::MonomialTable<N>;
  Taylor<N - 2> r;
  for (int k = 0; k < Out::size; ++k) {
    const auto e = Out::exponents[k];
    r[k] = (e.a + 2) * (e.a + 1) * t[In::index(e.a + 2, e.b, e.c)] +
           (e.b + 2) * (e.b + 1) * t[In::index(e.a, e.b + 2, e.c)] +
           (e.c + 2) * (e.c + 1) * t[In::index(e.a, e.b, e.c + 2)];
  }
  return r;
}

/// Substitute the increments `delta` (each with zero constant term) into the
/// polynomial `q`, i.e. expand q(delta(x)) to degree N.
template <int M, int N>
Taylor<N> compose(const Taylor<M>& q, const TaylorVec<N>& delta) {
  std::array<std::array<Taylor<N>, M + 1>, 3> powers;
  for (int axis = 0; axis < 3; ++axis) {
    powers[axis][0] = Taylor<N>(1.0);
    for (int k = 1; k <= M; ++k)
      powers[axis][k] = powers[axis][k - 1] * delta[axis];
  }
  Taylor<N> r;
  for (int k = 0; k < Taylor<M>::size; ++k) {
    if (q[k] == 0.0) continue;
    const auto e = detail::MonomialTable<M>::exponents[k];
    Taylor<N> term = powers[0][e.a];
    if (e.b > 0) term = term * powers[1][e.b];
    if (e.c > 0) term = term * powers[2][e.c];
    term *= q[k];
    r += term;
  }
  return r;
}

}  // namespace tracefem
