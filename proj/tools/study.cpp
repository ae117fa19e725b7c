// Convergence study of the C0 interior penalty TraceFEM on the unit sphere.
//
//   study --case paper --variant 0 --levels 4 --format csv --out table.csv

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "tracefem/study.hpp"

int main(int argc, char** argv) {
  using namespace tracefem;

  CLI::App app{"TraceFEM C0 interior penalty convergence study on the unit sphere"};
  StudyConfig config;
  std::string format = "csv";
  std::string out_path;

  const std::map<std::string, TestCase> cases{{"paper", TestCase::paper},
                                              {"harmonic", TestCase::harmonic}};
  app.add_option("--case", config.test_case, "Manufactured solution")
      ->transform(CLI::CheckedTransformer(cases, CLI::ignore_case));
  app.add_option("--variant", config.variant, "Stabilization variant")->check(CLI::Range(0, 2));
  app.add_option("--levels", config.levels, "Number of refinement levels")->check(CLI::PositiveNumber);
  app.add_option("--cells0", config.cells0, "Cells per axis on level 0")->check(CLI::Range(2, 1 << 12));
  app.add_option("--sigma", config.sigma, "Edge penalty")->check(CLI::PositiveNumber);
  app.add_option("--gamma", config.gamma, "Facet penalty")->check(CLI::PositiveNumber);
  app.add_option("--beta", config.beta, "Scaled gradient-jump penalty (variant 1)")->check(CLI::PositiveNumber);
  app.add_option("--box", config.box, "Half edge of the background cube")->check(CLI::PositiveNumber);
  app.add_option("--tol", config.tol, "Relative residual tolerance")->check(CLI::PositiveNumber);
  const std::map<std::string, Preconditioner> preconditioners{
      {"jacobi", Preconditioner::jacobi}, {"cholesky", Preconditioner::cholesky}};
  app.add_option("--preconditioner", config.preconditioner, "CG preconditioner")
      ->transform(CLI::CheckedTransformer(preconditioners, CLI::ignore_case));
  app.add_option("--max-iter", config.max_iter, "CG iteration cap (0: 50 ndof)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "md"}));
  app.add_option("--out", out_path, "Output file (default: stdout)");
  app.add_option("--export-surface", config.export_surface, "Write the finest Gamma_h to this file");
  app.add_flag("--reference-mode", config.reference_mode, "Deterministic single-threaded mode");
  CLI11_PARSE(app, argc, argv);

  std::cerr << "case=" << to_string(config.test_case) << " variant=" << config.variant
            << " sigma=" << config.sigma << " gamma=" << config.gamma << " beta=" << config.beta
            << " box=" << config.box << " tol=" << config.tol << '\n';

  auto start = std::chrono::steady_clock::now();
  auto progress = [&](const StudyRow& r) {
    const auto now = std::chrono::steady_clock::now();
    std::cerr << "level " << r.level << ": cells " << r.cells << ", ndof " << r.ndof << ", cg "
              << r.solve.iterations << " it, residual " << r.solve.residual
              << " (recomputed " << r.solve.true_residual << "), "
              << std::chrono::duration<double>(now - start).count() << " s\n";
    start = now;
  };

  auto emit = [&](const StudyReport& report) {
    std::ofstream file;
    if (!out_path.empty()) file.open(out_path);
    std::ostream& os = out_path.empty() ? std::cout : file;
    if (format == "md")
      write_markdown(os, report);
    else
      write_csv(os, report);
  };

  try {
    emit(run_study(config, progress));
  } catch (const StudyAborted& e) {
    std::cerr << "error: " << e.what() << '\n';
    emit(e.partial());
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
