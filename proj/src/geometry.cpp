#include "tracefem/geometry.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "tracefem/error.hpp"
#include "tracefem/quadrature.hpp"

namespace tracefem {

namespace {

template <int N>
Jet2 to_jet(const Taylor<N>& t) {
  return {t.value(), t.gradient(), t.hessian()};
}

class PlainField final : public ScalarField {
 public:
  explicit PlainField(AmbientPtr f) : f_(std::move(f)) {}
  double value(const Vec3& x) const override { return (*f_)(x); }
  Jet2 jet(const Vec3& x) const override { return to_jet((*f_)(seed<2>(x))); }

 private:
  AmbientPtr f_;
};

class ExtendedField final : public ScalarField {
 public:
  ExtendedField(SurfacePtr surface, AmbientPtr psi)
      : surface_(std::move(surface)), psi_(std::move(psi)) {}

  double value(const Vec3& x) const override {
    return (*psi_)(surface_->closest_point(x));
  }
  Jet2 jet(const Vec3& x) const override {
    return to_jet((*psi_)(surface_->closest_point(seed<2>(x))));
  }

 private:
  SurfacePtr surface_;
  AmbientPtr psi_;
};

class ShiftedField final : public ScalarField {
 public:
  ShiftedField(FieldPtr f, double shift) : f_(std::move(f)), shift_(shift) {}
  double value(const Vec3& x) const override { return f_->value(x) + shift_; }
  Jet2 jet(const Vec3& x) const override {
    Jet2 j = f_->jet(x);
    j.value += shift_;
    return j;
  }

 private:
  FieldPtr f_;
  double shift_;
};

class BilaplacianField final : public ScalarField {
 public:
  BilaplacianField(std::shared_ptr<const Sphere> sphere, AmbientPtr u)
      : sphere_(std::move(sphere)), u_(std::move(u)) {}

  double value(const Vec3& x) const override {
    return expansion_on_surface<4>(sphere_->closest_point(x)).value();
  }

  Jet2 jet(const Vec3& x) const override {
    const Vec3 y0 = sphere_->closest_point(x);
    const Taylor<2> g = expansion_on_surface<6>(y0);
    TaylorVec<2> delta = sphere_->closest_point(seed<2>(x));
    for (int i = 0; i < 3; ++i) delta[i][0] = 0.0;
    return to_jet(compose<2, 2>(g, delta));
  }

 private:
  // Expansion of G = Lap(w o p), w = Lap(u o p), around the surface point y0,
  // to degree N - 4.
  template <int N>
  Taylor<N - 4> expansion_on_surface(const Vec3& y0) const {
    const TaylorVec<N> p = sphere_->closest_point(seed<N>(y0));
    const Taylor<N - 2> w = laplacian((*u_)(p));
    TaylorVec<N - 2> delta;
    for (int i = 0; i < 3; ++i) {
      delta[i] = truncate<N - 2>(p[i]);
      delta[i][0] = 0.0;
    }
    return laplacian(compose<N - 2, N - 2>(w, delta));
  }

  std::shared_ptr<const Sphere> sphere_;
  AmbientPtr u_;
};

}  // namespace

FieldPtr as_field(AmbientPtr f) { return std::make_shared<PlainField>(std::move(f)); }

Mat3 ImplicitSurface::tangential_projector(const Vec3& x) const {
  const Vec3 n = normal(x);
  return Mat3::Identity() - n * n.transpose();
}

Eigen::Vector2d ImplicitSurface::principal_curvatures(const Vec3& x) const {
  // H n = 0: drop the eigenvector best aligned with n.
  Eigen::SelfAdjointEigenSolver<Mat3> eig(weingarten(x));
  const Vec3 n = normal(x);
  int drop = 0;
  double best = -1.0;
  for (int k = 0; k < 3; ++k) {
    const double a = std::abs(eig.eigenvectors().col(k).dot(n));
    if (a > best) {
      best = a;
      drop = k;
    }
  }
  Eigen::Vector2d kappa;
  int j = 0;
  for (int k = 0; k < 3; ++k)
    if (k != drop) kappa[j++] = eig.eigenvalues()[k];
  return kappa;
}

Sphere::Sphere(Vec3 center, double radius) : center_(std::move(center)), radius_(radius) {
  if (!(radius > 0.0)) throw PreconditionError("Sphere: radius must be positive");
}

void Sphere::check(const Vec3& x) const {
  if ((x - center_).squaredNorm() == 0.0)
    throw DomainError("Sphere: closest point undefined at the center");
}

double Sphere::level_set(const Vec3& x) const { return distance(x); }

double Sphere::distance(const Vec3& x) const { return (x - center_).norm() - radius_; }

Vec3 Sphere::normal(const Vec3& x) const {
  check(x);
  return (x - center_).normalized();
}

Mat3 Sphere::weingarten(const Vec3& x) const {
  check(x);
  const Vec3 r = x - center_;
  const double len = r.norm();
  const Vec3 n = r / len;
  return (Mat3::Identity() - n * n.transpose()) / len;
}

Vec3 Sphere::closest_point(const Vec3& x) const {
  check(x);
  const Vec3 r = x - center_;
  return center_ + radius_ * r / r.norm();
}

template <int N>
TaylorVec<N> Sphere::project(const TaylorVec<N>& x) const {
  check(Vec3(x[0].value(), x[1].value(), x[2].value()));
  TaylorVec<N> r;
  for (int i = 0; i < 3; ++i) r[i] = x[i] - center_[i];
  const Taylor<N> scale = radius_ / sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
  for (int i = 0; i < 3; ++i) r[i] = center_[i] + r[i] * scale;
  return r;
}

TaylorVec<2> Sphere::closest_point(const TaylorVec<2>& x) const { return project(x); }
TaylorVec<4> Sphere::closest_point(const TaylorVec<4>& x) const { return project(x); }
TaylorVec<6> Sphere::closest_point(const TaylorVec<6>& x) const { return project(x); }

FieldPtr extend(SurfacePtr surface, AmbientPtr psi) {
  return std::make_shared<ExtendedField>(std::move(surface), std::move(psi));
}

Vec3 surface_gradient(const ScalarField& psi, const Vec3& x, const Vec3& normal) {
  const Vec3 g = psi.jet(x).gradient;
  return g - normal * normal.dot(g);
}

SurfaceSecondDerivatives surface_hessian_laplacian(const ScalarField& psi,
                                                   const Vec3& x,
                                                   const Vec3& normal) {
  const Mat3 p = Mat3::Identity() - normal * normal.transpose();
  const Mat3 h = p * psi.jet(x).hessian * p;
  return {h, h.trace()};
}

SurfaceSecondDerivatives surface_hessian_laplacian(const ImplicitSurface& surface,
                                                   const ScalarField& psi,
                                                   const Vec3& x) {
  const Jet2 j = psi.jet(x);
  const Vec3 n = surface.normal(x);
  const Mat3 p = Mat3::Identity() - n * n.transpose();
  const Mat3 h = p * j.hessian * p - n.dot(j.gradient) * surface.weingarten(x);
  return {h, h.trace()};
}

FieldPtr surface_bilaplacian_field(std::shared_ptr<const Sphere> sphere, AmbientPtr u) {
  return std::make_shared<BilaplacianField>(std::move(sphere), std::move(u));
}

FieldPtr shifted(FieldPtr psi, double shift) {
  return std::make_shared<ShiftedField>(std::move(psi), shift);
}

double sphere_surface_integral(const Sphere& sphere,
                               const std::function<double(const Vec3&)>& g,
                               int refinement) {
  if (refinement < 1) throw PreconditionError("sphere_surface_integral: refinement < 1");
  const TriangleRule rule = gauss_triangle(8);
  const std::array<Vec3, 6> octa = {Vec3(1, 0, 0), Vec3(-1, 0, 0), Vec3(0, 1, 0),
                                    Vec3(0, -1, 0), Vec3(0, 0, 1), Vec3(0, 0, -1)};
  const int faces[8][3] = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                           {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  const double radius = sphere.radius();
  const Vec3& center = sphere.center();

  auto integrate_flat = [&](const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ds = b - a, dt = c - a;
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& l = rule.points[q];
      const Vec3 y = l[0] * a + l[1] * b + l[2] * c;
      const double len = y.norm();
      const Vec3 unit = y / len;
      const Mat3 dproj = radius * (Mat3::Identity() - unit * unit.transpose()) / len;
      const double jac = (dproj * ds).cross(dproj * dt).norm();
      sum += rule.weights[q] * jac * g(center + radius * unit);
    }
    return sum;
  };

  double total = 0.0;
  const int m = refinement;
  for (const auto& f : faces) {
    const Vec3& A = octa[f[0]];
    const Vec3 eb = (octa[f[1]] - A) / m, ec = (octa[f[2]] - A) / m;
    for (int i = 0; i < m; ++i)
      for (int j = 0; i + j < m; ++j) {
        const Vec3 p00 = A + i * eb + j * ec;
        total += integrate_flat(p00, p00 + eb, p00 + ec);
        if (i + j + 1 < m) total += integrate_flat(p00 + eb, p00 + eb + ec, p00 + ec);
      }
  }
  return total;
}

std::shared_ptr<const Sphere> unit_sphere() {
  static const auto sphere = std::make_shared<const Sphere>();
  return sphere;
}

AmbientPtr paper_solution() {
  return make_ambient([](auto x, auto y, auto z) {
    using std::cos;
    using std::exp;
    return exp(x + y * y) * cos(z * z * z);
  });
}

AmbientPtr harmonic_solution() {
  return make_ambient([](auto x, auto, auto) { return x; });
}

ExactData exact_data() {
  static const ExactData data = [] {
    const auto sphere = unit_sphere();
    const AmbientPtr u = paper_solution();
    const double mean =
        sphere_surface_integral(*sphere, [&](const Vec3& y) { return (*u)(y); }, 24) /
        (4.0 * std::numbers::pi);
    return ExactData{shifted(extend(sphere, u), -mean),
                     surface_bilaplacian_field(sphere, u), mean};
  }();
  return data;
}

ExactData harmonic_data() {
  const auto sphere = unit_sphere();
  const AmbientPtr u = harmonic_solution();
  return ExactData{extend(sphere, u), surface_bilaplacian_field(sphere, u), 0.0};
}

}  // namespace tracefem
