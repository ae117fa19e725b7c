#pragma once

/// \file fespace.hpp
/// Continuous P2 Lagrange space on the active mesh.

#include <array>
#include <vector>

#include <Eigen/Core>

#include "tracefem/mesh.hpp"
#include "tracefem/quadrature.hpp"

namespace tracefem {

/// Local dof order: vertices 0..3, then edges (0,1) (0,2) (0,3) (1,2) (1,3) (2,3).
inline constexpr std::array<std::array<int, 2>, 6> kTetEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Quadratic shape functions of one tetrahedron in physical coordinates.
class P2Basis {
 public:
  static constexpr int size = 10;

  explicit P2Basis(const std::array<Vec3, 4>& vertices);

  struct Values {
    std::array<double, size> value;
    std::array<Vec3, size> gradient;
  };

  std::array<double, 4> barycentric(const Vec3& x) const;
  Values eval(const Vec3& x) const;
  /// Hessians are constant on the tet.
  const std::array<Mat3, size>& hessians() const { return hessians_; }

 private:
  std::array<Vec3, 4> grad_lambda_;
  std::array<double, 4> offset_;
  std::array<Mat3, size> hessians_;
};

struct P2Space {
  std::vector<int> vertex_dofs;                      // background vertex of each vertex dof
  std::vector<std::array<int, 2>> edge_dofs;         // background vertex pair of each edge dof
  std::vector<std::array<int, P2Basis::size>> tet_dofs;  // per active tet
  int ndof = 0;
};

/// Dofs numbered by ascending vertex id, then ascending (min, max) edge key.
P2Space build_p2_space(const CutComplex& complex);

/// Basis of active tet `a` of the complex.
P2Basis tet_basis(const CutComplex& complex, int active);

/// c_i = integral of phi_i over Gamma_h.
Eigen::VectorXd mean_vector(const P2Space& space, const CutComplex& complex,
                            const TriangleRule& rule);

/// Nodal interpolant of a function.
Eigen::VectorXd interpolate(const P2Space& space, const CutComplex& complex,
                            const std::function<double(const Vec3&)>& g);

/// Physical location of every dof.
std::vector<Vec3> dof_points(const P2Space& space, const CutComplex& complex);

}  // namespace tracefem
