#include "tracefem/assembly.hpp"

#include <algorithm>
#include <array>
#include <span>

#include <Eigen/Dense>

#include "tracefem/error.hpp"
#include "tracefem/quadrature.hpp"

namespace tracefem {

namespace {

constexpr int kLocal = P2Basis::size;
using Local = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic>;

// P_h : Hess(phi_k) for the ten basis functions.
Eigen::Matrix<double, kLocal, 1> polygon_laplacians(const P2Basis& basis, const CutPolygon& poly) {
  const Mat3 p = poly.projector();
  Eigen::Matrix<double, kLocal, 1> l;
  for (int k = 0; k < kLocal; ++k) l[k] = (p.array() * basis.hessians()[k].array()).sum();
  return l;
}

std::array<int, 2 * kLocal> pair_dofs(const P2Space& space, int plus, int minus) {
  std::array<int, 2 * kLocal> dofs;
  std::copy(space.tet_dofs[plus].begin(), space.tet_dofs[plus].end(), dofs.begin());
  std::copy(space.tet_dofs[minus].begin(), space.tet_dofs[minus].end(), dofs.begin() + kLocal);
  return dofs;
}

}  // namespace

void FormParams::validate() const {
  if (!(sigma > 0.0) || !(gamma > 0.0)) throw PreconditionError("FormParams: sigma, gamma must be > 0");
  if (variant < 0 || variant > 2) throw PreconditionError("FormParams: variant must be 0, 1 or 2");
  if (variant == 1 && !(beta > 0.0)) throw PreconditionError("FormParams: beta must be > 0");
  if (!(h > 0.0)) throw PreconditionError("FormParams: h must be > 0");
}

FormWeights a_weights(const FormParams& params) {
  params.validate();
  FormWeights w;
  w.laplace = 1.0;
  w.consistency = 1.0;
  w.edge_penalty = params.sigma / params.h;
  return w;
}

FormWeights s_weights(const FormParams& params) {
  params.validate();
  FormWeights w;
  w.hessian_jump = params.gamma;
  switch (params.variant) {
    case 0:
      w.grad_jump = params.gamma;
      break;
    case 1:
      w.grad_jump = params.beta / (params.h * params.h);
      break;
    default:
      break;
  }
  return w;
}

FormWeights energy_weights(double h) {
  return {1.0, 0.0, 1.0 / h, 1.0, 1.0};
}

FormWeights operator+(const FormWeights& a, const FormWeights& b) {
  return {a.laplace + b.laplace, a.consistency + b.consistency, a.edge_penalty + b.edge_penalty,
          a.grad_jump + b.grad_jump, a.hessian_jump + b.hessian_jump};
}

SparseMatrix make_pattern(const P2Space& space, const CutComplex& complex) {
  const int ntet = static_cast<int>(space.tet_dofs.size());
  const int n = space.ndof;

  std::vector<std::vector<int>> neighbours(ntet);
  for (const auto& f : complex.facets) {
    neighbours[f.plus].push_back(f.minus);
    neighbours[f.minus].push_back(f.plus);
  }

  // dof -> tets incidence
  std::vector<std::size_t> start(n + 1, 0);
  for (const auto& dofs : space.tet_dofs)
    for (int d : dofs) ++start[d + 1];
  for (int i = 0; i < n; ++i) start[i + 1] += start[i];
  std::vector<int> incident(start[n]);
  {
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (int t = 0; t < ntet; ++t)
      for (int d : space.tet_dofs[t]) incident[fill[d]++] = t;
  }

  std::vector<std::size_t> row_ptr(n + 1, 0);
  std::vector<int> cols;
  std::vector<int> stamp(n, -1);
  std::vector<int> row;
  for (int i = 0; i < n; ++i) {
    row.clear();
    auto visit = [&](int t) {
      for (int d : space.tet_dofs[t])
        if (stamp[d] != i) {
          stamp[d] = i;
          row.push_back(d);
        }
    };
    for (std::size_t k = start[i]; k < start[i + 1]; ++k) {
      const int t = incident[k];
      visit(t);
      for (int nb : neighbours[t]) visit(nb);
    }
    std::sort(row.begin(), row.end());
    cols.insert(cols.end(), row.begin(), row.end());
    row_ptr[i + 1] = cols.size();
  }
  return SparseMatrix::from_pattern(n, std::move(row_ptr), std::move(cols));
}

SparseMatrix assemble_forms(const P2Space& space, const CutComplex& complex,
                            const FormWeights& weights) {
  SparseMatrix a = make_pattern(space, complex);
  const int ntet = static_cast<int>(complex.polygons.size());

  std::vector<P2Basis> bases;
  bases.reserve(ntet);
  std::vector<Eigen::Matrix<double, kLocal, 1>> laplacians(ntet);
  for (int t = 0; t < ntet; ++t) {
    bases.push_back(tet_basis(complex, t));
    laplacians[t] = polygon_laplacians(bases[t], complex.polygons[t]);
  }

  if (weights.laplace != 0.0) {
    Local local(kLocal, kLocal);
    for (int t = 0; t < ntet; ++t) {
      local = complex.polygons[t].area * laplacians[t] * laplacians[t].transpose();
      a.add_local(space.tet_dofs[t], local, weights.laplace);
    }
  }

  if (weights.consistency != 0.0 || weights.edge_penalty != 0.0) {
    const SegmentRule rule = gauss_segment(3);
    Local local(2 * kLocal, 2 * kLocal);
    Eigen::Matrix<double, 2 * kLocal, 1> jump, average;
    for (const auto& e : complex.edges) {
      if (e.plus < 0 || e.minus < 0) throw Error("assembly: surface edge without two polygons");
      const auto& kp = complex.polygons[e.plus];
      const auto& km = complex.polygons[e.minus];
      const Vec3 mu_p = kp.projector() * e.mu;
      const Vec3 mu_m = km.projector() * e.mu;
      average << 0.5 * laplacians[e.plus], 0.5 * laplacians[e.minus];
      local.setZero();
      for (const auto& q : segment_points(e.endpoints[0], e.endpoints[1], rule)) {
        const auto vp = bases[e.plus].eval(q.x);
        const auto vm = bases[e.minus].eval(q.x);
        for (int k = 0; k < kLocal; ++k) {
          jump[k] = mu_p.dot(vp.gradient[k]);
          jump[kLocal + k] = -mu_m.dot(vm.gradient[k]);
        }
        local += q.weight * (weights.edge_penalty * jump * jump.transpose() -
                             weights.consistency *
                                 (average * jump.transpose() + jump * average.transpose()));
      }
      a.add_local(pair_dofs(space, e.plus, e.minus), local);
    }
  }

  if (weights.grad_jump != 0.0 || weights.hessian_jump != 0.0) {
    const TriangleRule rule = gauss_triangle(2);
    Local local(2 * kLocal, 2 * kLocal);
    Eigen::Matrix<double, 3, 2 * kLocal> grad;
    Eigen::Matrix<double, 9, 2 * kLocal> hess;
    std::vector<WeightedPoint> points;
    for (const auto& f : complex.facets) {
      local.setZero();
      if (weights.grad_jump != 0.0) {
        points.clear();
        map_triangle(f.vertices[0], f.vertices[1], f.vertices[2], rule, points);
        for (const auto& q : points) {
          const auto vp = bases[f.plus].eval(q.x);
          const auto vm = bases[f.minus].eval(q.x);
          for (int k = 0; k < kLocal; ++k) {
            grad.col(k) = vp.gradient[k];
            grad.col(kLocal + k) = -vm.gradient[k];
          }
          local += (q.weight * weights.grad_jump) * grad.transpose() * grad;
        }
      }
      if (weights.hessian_jump != 0.0) {
        for (int k = 0; k < kLocal; ++k) {
          hess.col(k) = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(bases[f.plus].hessians()[k].data());
          hess.col(kLocal + k) =
              -Eigen::Map<const Eigen::Matrix<double, 9, 1>>(bases[f.minus].hessians()[k].data());
        }
        local += (f.area * weights.hessian_jump) * hess.transpose() * hess;
      }
      a.add_local(pair_dofs(space, f.plus, f.minus), local);
    }
  }

  a.prune();
  return a;
}

SparseMatrix assemble_a(const P2Space& space, const CutComplex& complex, const FormParams& params) {
  return assemble_forms(space, complex, a_weights(params));
}

SparseMatrix assemble_s(const P2Space& space, const CutComplex& complex, const FormParams& params) {
  return assemble_forms(space, complex, s_weights(params));
}

SparseMatrix assemble_system(const P2Space& space, const CutComplex& complex,
                             const FormParams& params) {
  return assemble_forms(space, complex, a_weights(params) + s_weights(params));
}

Eigen::VectorXd assemble_rhs(const P2Space& space, const CutComplex& complex,
                             const ScalarField& f, int degree) {
  const TriangleRule rule = gauss_triangle(degree);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(space.ndof);
  for (std::size_t t = 0; t < complex.polygons.size(); ++t) {
    const P2Basis basis = tet_basis(complex, static_cast<int>(t));
    const auto& dofs = space.tet_dofs[t];
    for (const auto& q : polygon_points(complex.polygons[t].vertices(), rule)) {
      const double fq = q.weight * f.value(q.x);
      const auto v = basis.eval(q.x);
      for (int k = 0; k < kLocal; ++k) b[dofs[k]] += fq * v.value[k];
    }
  }
  return b;
}

}  // namespace tracefem
