#pragma once

/// \file sparse.hpp
/// Compressed sparse row matrix with a fixed sparsity pattern.

#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace tracefem {

class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Pattern from groups of mutually coupled indices: every pair (i, j) with
  /// i and j in a common group gets a slot. Columns sorted per row.
  static SparseMatrix from_groups(int n, std::span<const std::vector<int>> groups);
  /// Pattern given directly in CSR form (columns sorted and unique per row).
  static SparseMatrix from_pattern(int n, std::vector<std::size_t> row_ptr, std::vector<int> cols);

  int rows() const { return n_; }
  std::size_t nonzeros() const { return cols_.size(); }

  /// values(i, j) += v for all (i, j) in dofs x dofs; every pair must be in
  /// the pattern.
  void add_local(std::span<const int> dofs, const Eigen::MatrixXd& local, double scale = 1.0);

  double coeff(int i, int j) const;
  void multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
  Eigen::VectorXd diagonal() const;

  double max_abs() const;
  /// max |A_ij - A_ji|.
  double max_asymmetry() const;

  /// Drops explicitly stored zeros.
  void prune();

  Eigen::MatrixXd to_dense() const;

  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& cols() const { return cols_; }
  const std::vector<double>& values() const { return vals_; }
  std::vector<double>& values() { return vals_; }

 private:
  int n_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<int> cols_;
  std::vector<double> vals_;
};

/// `i j value` lines (0-based), 17 significant digits.
void write_coordinate(std::ostream& os, const SparseMatrix& a);

}  // namespace tracefem
