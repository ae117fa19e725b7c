#pragma once

/// \file geometry.hpp
/// Exact-surface calculus: implicit surfaces, closest-point extension,
/// tangential differential operators and the manufactured data of the
/// convergence study.

#include <functional>
#include <memory>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "tracefem/taylor.hpp"

namespace tracefem {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Value, gradient and Hessian of a scalar field at one point.
struct Jet2 {
  double value = 0.0;
  Vec3 gradient = Vec3::Zero();
  Mat3 hessian = Mat3::Zero();
};

/// Evaluation contract of a scalar field on R^3 (to second order).
class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual double value(const Vec3& x) const = 0;
  virtual Jet2 jet(const Vec3& x) const = 0;
};

using FieldPtr = std::shared_ptr<const ScalarField>;

/// A scalar expression that can be evaluated on doubles and on truncated
/// Taylor polynomials of the orders used by the library.
class AmbientFunction {
 public:
  virtual ~AmbientFunction() = default;
  virtual double operator()(const Vec3& x) const = 0;
  virtual Taylor<2> operator()(const TaylorVec<2>& x) const = 0;
  virtual Taylor<4> operator()(const TaylorVec<4>& x) const = 0;
  virtual Taylor<6> operator()(const TaylorVec<6>& x) const = 0;
};

using AmbientPtr = std::shared_ptr<const AmbientFunction>;

namespace detail {
template <class F>
class AmbientExpression final : public AmbientFunction {
 public:
  explicit AmbientExpression(F f) : f_(std::move(f)) {}
  double operator()(const Vec3& x) const override { return f_(x[0], x[1], x[2]); }
  Taylor<2> operator()(const TaylorVec<2>& x) const override { return f_(x[0], x[1], x[2]); }
  Taylor<4> operator()(const TaylorVec<4>& x) const override { return f_(x[0], x[1], x[2]); }
  Taylor<6> operator()(const TaylorVec<6>& x) const override { return f_(x[0], x[1], x[2]); }

 private:
  F f_;
};
}  // namespace detail

/// Wraps a generic callable `f(x, y, z)` (written with unqualified `exp`,
/// `cos`, ... after `using std::exp;` etc.) as an AmbientFunction.
template <class F>
AmbientPtr make_ambient(F f) {
  return std::make_shared<detail::AmbientExpression<F>>(std::move(f));
}

/// Jet of an ambient function taken directly in R^3 (no extension).
FieldPtr as_field(AmbientPtr f);

/// Implicitly defined closed surface with its signed distance function.
///
/// The distance is negative inside; normal = grad d, weingarten = Hess d and
/// closest_point(x) = x - d(x) normal(x).
class ImplicitSurface {
 public:
  virtual ~ImplicitSurface() = default;

  virtual double level_set(const Vec3& x) const = 0;
  virtual double distance(const Vec3& x) const = 0;
  virtual Vec3 normal(const Vec3& x) const = 0;
  virtual Mat3 weingarten(const Vec3& x) const = 0;
  virtual Vec3 closest_point(const Vec3& x) const = 0;

  /// Taylor expansions of the closest point map around x.
  virtual TaylorVec<2> closest_point(const TaylorVec<2>& x) const = 0;
  virtual TaylorVec<4> closest_point(const TaylorVec<4>& x) const = 0;
  virtual TaylorVec<6> closest_point(const TaylorVec<6>& x) const = 0;

  Mat3 tangential_projector(const Vec3& x) const;
  /// Principal curvatures (the two nonzero eigenvalues of H restricted to the
  /// tangent plane), in ascending order.
  Eigen::Vector2d principal_curvatures(const Vec3& x) const;
};

using SurfacePtr = std::shared_ptr<const ImplicitSurface>;

/// Sphere |x - center| = radius, with level set phi = d = |x - center| - R.
class Sphere final : public ImplicitSurface {
 public:
  explicit Sphere(Vec3 center = Vec3::Zero(), double radius = 1.0);

  double level_set(const Vec3& x) const override;
  double distance(const Vec3& x) const override;
  Vec3 normal(const Vec3& x) const override;
  Mat3 weingarten(const Vec3& x) const override;
  Vec3 closest_point(const Vec3& x) const override;
  TaylorVec<2> closest_point(const TaylorVec<2>& x) const override;
  TaylorVec<4> closest_point(const TaylorVec<4>& x) const override;
  TaylorVec<6> closest_point(const TaylorVec<6>& x) const override;

  const Vec3& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  template <int N>
  TaylorVec<N> project(const TaylorVec<N>& x) const;
  void check(const Vec3& x) const;

  Vec3 center_;
  double radius_;
};

/// psi^e = psi o p: the closest-point extension of psi off the surface.
/// Derivatives are exact (chain rule through p by Taylor arithmetic).
FieldPtr extend(SurfacePtr surface, AmbientPtr psi);

/// (I - normal normal^T) grad psi(x).
Vec3 surface_gradient(const ScalarField& psi, const Vec3& x, const Vec3& normal);

struct SurfaceSecondDerivatives {
  Mat3 hessian;      // projected surface Hessian
  double laplacian;  // its trace
};

/// Projected Hessian P Hess(psi) P and its trace for a constant (planar)
/// normal; on a flat polygon this is the exact tangential Hessian.
SurfaceSecondDerivatives surface_hessian_laplacian(const ScalarField& psi,
                                                   const Vec3& x,
                                                   const Vec3& normal);

/// Same on the exact surface: P Hess(psi) P - (n . grad psi) H with the normal
/// and Weingarten map of `surface` at x.
SurfaceSecondDerivatives surface_hessian_laplacian(const ImplicitSurface& surface,
                                                   const ScalarField& psi,
                                                   const Vec3& x);

/// f(x) = (Lap_G Lap_G u)(p(x)) on a sphere, for the ray extension of u.
///
/// For a field constant along rays the Euclidean Laplacian on the sphere
/// equals the Laplace-Beltrami operator, so f = Lap(w o p) at p(x) with
/// w = Lap(u o p). `value` runs at Taylor order 4, `jet` at order 6.
FieldPtr surface_bilaplacian_field(std::shared_ptr<const Sphere> sphere,
                                   AmbientPtr u);

/// psi(x) + shift.
FieldPtr shifted(FieldPtr psi, double shift);

/// Integral of g over a sphere, by a degree-8 rule on the radially projected
/// faces of an octahedron split `refinement` times per edge. Curved faces are
/// integrated with the exact Jacobian of the projection.
double sphere_surface_integral(const Sphere& sphere,
                               const std::function<double(const Vec3&)>& g,
                               int refinement);

/// Manufactured data on the unit sphere.
struct ExactData {
  FieldPtr u_exact;   // ray extension of u minus its mean over the sphere
  FieldPtr f;         // surface bilaplacian of u, on the band
  double mean_shift;  // the mean that was subtracted
};

/// u = exp(x + y^2) cos(z^3).
AmbientPtr paper_solution();
/// u = x (a degree-1 spherical harmonic on the unit sphere).
AmbientPtr harmonic_solution();

/// Exact data of the study, mean computed once by surface quadrature.
ExactData exact_data();
/// Eigenfunction case u = x1, f = 4 x1.
ExactData harmonic_data();

std::shared_ptr<const Sphere> unit_sphere();

}  // namespace tracefem
