#include "tracefem/fespace.hpp"

#include <algorithm>

#include <Eigen/Dense>

#include "tracefem/error.hpp"

namespace tracefem {

P2Basis::P2Basis(const std::array<Vec3, 4>& v) {
  Mat3 jac;
  for (int k = 0; k < 3; ++k) jac.col(k) = v[k + 1] - v[0];
  const double det = jac.determinant();
  if (!(std::abs(det) > 1e-14 * (v[1] - v[0]).squaredNorm() * (v[1] - v[0]).norm()))
    throw PreconditionError("P2Basis: degenerate tetrahedron");
  // lambda_{k+1} = (J^{-1} (x - v0))_k, lambda_0 = 1 - sum.
  const Mat3 inv = jac.inverse();
  Vec3 sum = Vec3::Zero();
  double off_sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    grad_lambda_[k + 1] = inv.row(k).transpose();
    offset_[k + 1] = -inv.row(k).dot(v[0]);
    sum += grad_lambda_[k + 1];
    off_sum += offset_[k + 1];
  }
  grad_lambda_[0] = -sum;
  offset_[0] = 1.0 - off_sum;

  for (int i = 0; i < 4; ++i) hessians_[i] = 4.0 * grad_lambda_[i] * grad_lambda_[i].transpose();
  for (int e = 0; e < 6; ++e) {
    const auto [i, j] = kTetEdges[e];
    const Mat3 outer = grad_lambda_[i] * grad_lambda_[j].transpose();
    hessians_[4 + e] = 4.0 * (outer + outer.transpose());
  }
}

std::array<double, 4> P2Basis::barycentric(const Vec3& x) const {
  std::array<double, 4> l;
  for (int i = 0; i < 4; ++i) l[i] = offset_[i] + grad_lambda_[i].dot(x);
  return l;
}

P2Basis::Values P2Basis::eval(const Vec3& x) const {
  const auto l = barycentric(x);
  Values out;
  for (int i = 0; i < 4; ++i) {
    out.value[i] = l[i] * (2.0 * l[i] - 1.0);
    out.gradient[i] = (4.0 * l[i] - 1.0) * grad_lambda_[i];
  }
  for (int e = 0; e < 6; ++e) {
    const auto [i, j] = kTetEdges[e];
    out.value[4 + e] = 4.0 * l[i] * l[j];
    out.gradient[4 + e] = 4.0 * (l[j] * grad_lambda_[i] + l[i] * grad_lambda_[j]);
  }
  return out;
}

P2Space build_p2_space(const CutComplex& complex) {
  if (complex.active_tets.empty()) throw PreconditionError("build_p2_space: empty active mesh");
  const auto& mesh = *complex.background;
  P2Space space;

  std::vector<int> verts;
  std::vector<std::array<int, 2>> edges;
  for (int t : complex.active_tets) {
    const auto& tet = mesh.tets[t];
    for (int v : tet) verts.push_back(v);
    for (const auto& [i, j] : kTetEdges)
      edges.push_back({std::min(tet[i], tet[j]), std::max(tet[i], tet[j])});
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  space.vertex_dofs = verts;
  space.edge_dofs = edges;
  const int nv = static_cast<int>(verts.size());
  space.ndof = nv + static_cast<int>(edges.size());

  space.tet_dofs.reserve(complex.active_tets.size());
  for (int t : complex.active_tets) {
    const auto& tet = mesh.tets[t];
    std::array<int, P2Basis::size> dofs;
    for (int i = 0; i < 4; ++i)
      dofs[i] = static_cast<int>(std::lower_bound(verts.begin(), verts.end(), tet[i]) - verts.begin());
    for (int e = 0; e < 6; ++e) {
      const auto [i, j] = kTetEdges[e];
      const std::array<int, 2> key{std::min(tet[i], tet[j]), std::max(tet[i], tet[j])};
      dofs[4 + e] =
          nv + static_cast<int>(std::lower_bound(edges.begin(), edges.end(), key) - edges.begin());
    }
    space.tet_dofs.push_back(dofs);
  }
  return space;
}

P2Basis tet_basis(const CutComplex& complex, int active) {
  return P2Basis(complex.background->tet_vertices(complex.active_tets[active]));
}

Eigen::VectorXd mean_vector(const P2Space& space, const CutComplex& complex,
                            const TriangleRule& rule) {
  if (rule.degree < 2) throw PreconditionError("mean_vector: rule degree must be >= 2");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(space.ndof);
  for (std::size_t a = 0; a < complex.polygons.size(); ++a) {
    const P2Basis basis = tet_basis(complex, static_cast<int>(a));
    const auto& dofs = space.tet_dofs[a];
    for (const auto& q : polygon_points(complex.polygons[a].vertices(), rule)) {
      const auto values = basis.eval(q.x);
      for (int k = 0; k < P2Basis::size; ++k) c[dofs[k]] += q.weight * values.value[k];
    }
  }
  return c;
}

std::vector<Vec3> dof_points(const P2Space& space, const CutComplex& complex) {
  const auto& mesh = *complex.background;
  std::vector<Vec3> points;
  points.reserve(space.ndof);
  for (int v : space.vertex_dofs) points.push_back(mesh.vertices[v]);
  for (const auto& [a, b] : space.edge_dofs) points.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
  return points;
}

Eigen::VectorXd interpolate(const P2Space& space, const CutComplex& complex,
                            const std::function<double(const Vec3&)>& g) {
  const auto points = dof_points(space, complex);
  Eigen::VectorXd v(space.ndof);
  for (int i = 0; i < space.ndof; ++i) v[i] = g(points[i]);
  return v;
}

}  // namespace tracefem
