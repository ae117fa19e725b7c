#pragma once

/// \file assembly.hpp
/// C0 interior penalty forms on the cut complex.
///
/// All forms are built from five elementary pieces:
///
///   laplace       (Lap_h v, Lap_h w)_K
///   consistency  -({Lap_h v}, mu . [grad_h w])_E - (mu . [grad_h v], {Lap_h w})_E
///   edge_penalty  (mu . [grad_h v], mu . [grad_h w])_E
///   grad_jump     ([grad v], [grad w])_F
///   hessian_jump  ([Hess v], [Hess w])_F
///
/// where Lap_h v = P_h : Hess v on each cut polygon, grad_h = P_h grad, E runs
/// over surface edges and F over interior facets of the active mesh.

#include <Eigen/Core>

#include "tracefem/fespace.hpp"
#include "tracefem/geometry.hpp"
#include "tracefem/mesh.hpp"
#include "tracefem/sparse.hpp"

namespace tracefem {

struct FormParams {
  double sigma = 10.0;  // edge penalty
  double gamma = 10.0;  // facet penalty
  double beta = 10.0;   // scaled gradient-jump penalty, variant 1 only
  int variant = 0;      // 0: gamma (grad + Hess jumps), 1: beta/h^2 grad + gamma Hess, 2: gamma Hess
  double h = 0.0;

  void validate() const;
};

struct FormWeights {
  double laplace = 0.0;
  double consistency = 0.0;
  double edge_penalty = 0.0;
  double grad_jump = 0.0;
  double hessian_jump = 0.0;
};

/// Weights of a_h: laplace + consistency + sigma/h edge_penalty.
FormWeights a_weights(const FormParams& params);
/// Weights of the stabilization variant s_h^(j).
FormWeights s_weights(const FormParams& params);
/// Weights of the squared energy norm (laplace + edge_penalty/h + both jumps).
FormWeights energy_weights(double h);
FormWeights operator+(const FormWeights& a, const FormWeights& b);

/// Sparsity pattern coupling the dofs of every active tet with those of its
/// facet neighbours.
SparseMatrix make_pattern(const P2Space& space, const CutComplex& complex);

/// Weighted sum of the elementary forms in one pass. Quadrature: edges use a
/// 2-point Gauss rule, facet gradient jumps the degree-2 triangle rule.
SparseMatrix assemble_forms(const P2Space& space, const CutComplex& complex,
                            const FormWeights& weights);

SparseMatrix assemble_a(const P2Space& space, const CutComplex& complex, const FormParams& params);
SparseMatrix assemble_s(const P2Space& space, const CutComplex& complex, const FormParams& params);
/// a_h + s_h^(j).
SparseMatrix assemble_system(const P2Space& space, const CutComplex& complex,
                             const FormParams& params);

/// b_i = (f, phi_i) on Gamma_h.
Eigen::VectorXd assemble_rhs(const P2Space& space, const CutComplex& complex,
                             const ScalarField& f, int degree = 6);

}  // namespace tracefem
