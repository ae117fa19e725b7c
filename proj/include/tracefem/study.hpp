#pragma once

/// \file study.hpp
/// Error norms, rates and the mesh-refinement driver for the sphere problem.

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tracefem/assembly.hpp"
#include "tracefem/fespace.hpp"
#include "tracefem/geometry.hpp"
#include "tracefem/mesh.hpp"
#include "tracefem/solver.hpp"

namespace tracefem {

struct ErrorTriple {
  double l2 = 0.0;  // ||u^e - u_h|| on Gamma_h
  double h1 = 0.0;  // ||grad_h (u^e - u_h)|| on Gamma_h
  double lb = 0.0;  // ||Lap_h (u^e - u_h)|| on the cut polygons
};

/// Errors against `exact` after removing the Gamma_h-mean of u^e - u_h (for
/// a mean-free u_h this is the Gamma_h-mean of the exact extension).
ErrorTriple compute_errors(const P2Space& space, const CutComplex& complex,
                           const Eigen::VectorXd& u_h, const ScalarField& exact,
                           int degree = 8);

/// Discrete H^2-type norm: (||Lap_h v||^2 + h^-1 ||mu . [grad_h v]||^2_E
///                          + ||[grad v]||^2_F + ||[Hess v]||^2_F)^(1/2).
double energy_norm(const P2Space& space, const CutComplex& complex, const Eigen::VectorXd& v);

struct RateTriple {
  std::optional<double> l2, h1, lb;
};

/// log(e_k / e_{k-1}) / log(n_k / n_{k-1}); empty when an error is zero.
std::optional<double> convergence_rate(double error_prev, double error, double ndof_prev,
                                       double ndof);

enum class TestCase { paper, harmonic };

struct StudyConfig {
  TestCase test_case = TestCase::paper;
  int variant = 0;
  int levels = 4;
  int cells0 = 8;
  double sigma = 10.0;
  double gamma = 10.0;
  double beta = 10.0;
  double box = 1.2;  // background cube [-box, box]^3
  double tol = 1e-10;
  int max_iter = 0;  // 0: 50 * ndof
  Preconditioner preconditioner = Preconditioner::cholesky;
  double guard = 1e-10;
  std::string export_surface;  // Gamma_h of the finest level, if nonempty
  bool reference_mode = false;
};

struct StudyRow {
  int level = 0;
  int cells = 0;
  double h = 0.0;
  int ndof = 0;
  ErrorTriple errors;
  RateTriple rates;
  SolveReport solve;
};

struct StudyReport {
  StudyConfig config;
  std::vector<StudyRow> rows;
};

/// Fills in the rate columns of rows 1.. from the error columns.
void compute_rates(std::vector<StudyRow>& rows);

/// Everything built for one refinement level.
struct LevelProblem {
  std::shared_ptr<const BackgroundMesh> mesh;
  CutComplex complex;
  P2Space space;
  FormParams params;
};

/// Band background mesh, cut complex and P2 space for n_cells per axis.
LevelProblem build_level(const StudyConfig& config, int n_cells);

/// Solution of one level.
struct LevelSolution {
  Eigen::VectorXd u;
  SolveReport solve;
  ErrorTriple errors;
};

LevelSolution solve_level(const LevelProblem& problem, const ExactData& data,
                          const StudyConfig& config);

ExactData exact_data_for(TestCase test_case);

/// Raised when a level fails; carries the rows completed before it.
class StudyAborted : public Error {
 public:
  StudyAborted(const std::string& what, StudyReport partial)
      : Error(what), partial_(std::move(partial)) {}
  const StudyReport& partial() const { return partial_; }

 private:
  StudyReport partial_;
};

/// Runs levels 0..levels-1 with n_cells = cells0 * 2^level. `progress`, if
/// set, is called after each completed row.
StudyReport run_study(const StudyConfig& config,
                      const std::function<void(const StudyRow&)>& progress = {});

/// Columns: level,cells,h,ndof,err_l2,rate_l2,err_h1,rate_h1,err_lb,rate_lb.
void write_csv(std::ostream& os, const StudyReport& report);
void write_markdown(std::ostream& os, const StudyReport& report);

std::string to_string(TestCase test_case);

}  // namespace tracefem
