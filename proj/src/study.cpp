#include "tracefem/study.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "tracefem/quadrature.hpp"

namespace tracefem {

namespace {

std::string format_error(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string format_rate(const std::optional<double>& r) {
  if (!r) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", *r);
  return buf;
}

}  // namespace

ErrorTriple compute_errors(const P2Space& space, const CutComplex& complex,
                           const Eigen::VectorXd& u_h, const ScalarField& exact, int degree) {
  const TriangleRule rule = gauss_triangle(degree);
  std::vector<double> diff;
  std::vector<double> weights;
  double h1 = 0.0, lb = 0.0, integral = 0.0, area = 0.0;

  for (std::size_t t = 0; t < complex.polygons.size(); ++t) {
    const auto& poly = complex.polygons[t];
    const P2Basis basis = tet_basis(complex, static_cast<int>(t));
    const auto& dofs = space.tet_dofs[t];
    const Mat3 proj = poly.projector();

    Mat3 hess_h = Mat3::Zero();
    for (int k = 0; k < P2Basis::size; ++k) hess_h += u_h[dofs[k]] * basis.hessians()[k];

    for (const auto& q : polygon_points(poly.vertices(), rule)) {
      const Jet2 j = exact.jet(q.x);
      const auto v = basis.eval(q.x);
      double value_h = 0.0;
      Vec3 grad_h = Vec3::Zero();
      for (int k = 0; k < P2Basis::size; ++k) {
        value_h += u_h[dofs[k]] * v.value[k];
        grad_h += u_h[dofs[k]] * v.gradient[k];
      }
      const double e = j.value - value_h;
      const Vec3 ge = proj * (j.gradient - grad_h);
      const double le = (proj.array() * (j.hessian - hess_h).array()).sum();
      diff.push_back(e);
      weights.push_back(q.weight);
      integral += q.weight * e;
      area += q.weight;
      h1 += q.weight * ge.squaredNorm();
      lb += q.weight * le * le;
    }
  }
  const double mean = area > 0.0 ? integral / area : 0.0;
  double l2 = 0.0;
  for (std::size_t k = 0; k < diff.size(); ++k) l2 += weights[k] * (diff[k] - mean) * (diff[k] - mean);
  return {std::sqrt(l2), std::sqrt(h1), std::sqrt(lb)};
}

double energy_norm(const P2Space& space, const CutComplex& complex, const Eigen::VectorXd& v) {
  const SparseMatrix e = assemble_forms(space, complex, energy_weights(complex.h()));
  return std::sqrt(std::max(0.0, v.dot(e * v)));
}

std::optional<double> convergence_rate(double error_prev, double error, double ndof_prev,
                                       double ndof) {
  if (!(error_prev > 0.0) || !(error > 0.0) || ndof_prev == ndof) return std::nullopt;
  return std::log(error / error_prev) / std::log(ndof / ndof_prev);
}

void compute_rates(std::vector<StudyRow>& rows) {
  for (std::size_t k = 0; k < rows.size(); ++k) {
    rows[k].rates = {};
    if (k == 0) continue;
    const auto& p = rows[k - 1];
    auto& r = rows[k];
    r.rates.l2 = convergence_rate(p.errors.l2, r.errors.l2, p.ndof, r.ndof);
    r.rates.h1 = convergence_rate(p.errors.h1, r.errors.h1, p.ndof, r.ndof);
    r.rates.lb = convergence_rate(p.errors.lb, r.errors.lb, p.ndof, r.ndof);
  }
}

ExactData exact_data_for(TestCase test_case) {
  return test_case == TestCase::paper ? exact_data() : harmonic_data();
}

LevelProblem build_level(const StudyConfig& config, int n_cells) {
  const auto sphere = unit_sphere();
  const LevelSet phi = [&](const Vec3& x) { return sphere->level_set(x); };
  const Cube box{-config.box, config.box};
  LevelProblem p;
  p.mesh = std::make_shared<const BackgroundMesh>(build_band_mesh(box, n_cells, phi, config.guard));
  p.complex = extract_cut_complex(p.mesh, interpolate_levelset(phi, *p.mesh, config.guard));
  p.space = build_p2_space(p.complex);
  p.params.sigma = config.sigma;
  p.params.gamma = config.gamma;
  p.params.beta = config.beta;
  p.params.variant = config.variant;
  p.params.h = p.mesh->h;
  p.params.validate();
  return p;
}

LevelSolution solve_level(const LevelProblem& problem, const ExactData& data,
                          const StudyConfig& config) {
  const SparseMatrix a = assemble_system(problem.space, problem.complex, problem.params);
  const Eigen::VectorXd b = assemble_rhs(problem.space, problem.complex, *data.f);
  const Eigen::VectorXd c = mean_vector(problem.space, problem.complex, gauss_triangle(2));
  SolveResult solved = solve_constrained(a, b, c, config.tol, config.max_iter, config.preconditioner);
  LevelSolution s;
  s.errors = compute_errors(problem.space, problem.complex, solved.u, *data.u_exact);
  s.u = std::move(solved.u);
  s.solve = solved.report;
  return s;
}

StudyReport run_study(const StudyConfig& config,
                      const std::function<void(const StudyRow&)>& progress) {
  if (config.levels < 1) throw PreconditionError("run_study: levels must be >= 1");
  if (config.variant < 0 || config.variant > 2) throw PreconditionError("run_study: variant must be 0, 1 or 2");
  if (config.cells0 < 2) throw PreconditionError("run_study: cells0 must be >= 2");

  const ExactData data = exact_data_for(config.test_case);
  StudyReport report;
  report.config = config;
  for (int level = 0; level < config.levels; ++level) {
    const int cells = config.cells0 << level;
    StudyRow row;
    row.level = level;
    row.cells = cells;
    try {
      const LevelProblem problem = build_level(config, cells);
      row.h = problem.mesh->h;
      row.ndof = problem.space.ndof;
      const LevelSolution s = solve_level(problem, data, config);
      row.errors = s.errors;
      row.solve = s.solve;
      if (level + 1 == config.levels && !config.export_surface.empty()) {
        std::ofstream out(config.export_surface);
        write_surface(out, problem.complex);
      }
    } catch (const Error& e) {
      compute_rates(report.rows);
      throw StudyAborted("level " + std::to_string(level) + ": " + e.what(), report);
    }
    report.rows.push_back(row);
    compute_rates(report.rows);
    if (progress) progress(report.rows.back());
  }
  return report;
}

void write_csv(std::ostream& os, const StudyReport& report) {
  os << "level,cells,h,ndof,err_l2,rate_l2,err_h1,rate_h1,err_lb,rate_lb\n";
  for (const auto& r : report.rows)
    os << r.level << ',' << r.cells << ',' << format_error(r.h) << ',' << r.ndof << ','
       << format_error(r.errors.l2) << ',' << format_rate(r.rates.l2) << ','
       << format_error(r.errors.h1) << ',' << format_rate(r.rates.h1) << ','
       << format_error(r.errors.lb) << ',' << format_rate(r.rates.lb) << '\n';
}

void write_markdown(std::ostream& os, const StudyReport& report) {
  const auto& c = report.config;
  os << "case " << to_string(c.test_case) << ", variant " << c.variant << ", sigma " << c.sigma
     << ", gamma " << c.gamma << ", beta " << c.beta << ", box [-" << c.box << ", " << c.box
     << "]^3, tol " << c.tol << "\n\n";
  os << "| level | cells | h | ndof | L2 error | rate | H1 error | rate | LB error | rate |\n";
  os << "|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : report.rows)
    os << "| " << r.level << " | " << r.cells << " | " << format_error(r.h) << " | " << r.ndof
       << " | " << format_error(r.errors.l2) << " | " << format_rate(r.rates.l2) << " | "
       << format_error(r.errors.h1) << " | " << format_rate(r.rates.h1) << " | "
       << format_error(r.errors.lb) << " | " << format_rate(r.rates.lb) << " |\n";
}

std::string to_string(TestCase test_case) {
  return test_case == TestCase::paper ? "paper" : "harmonic";
}

}  // namespace tracefem
