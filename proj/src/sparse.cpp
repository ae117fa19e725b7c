#include "tracefem/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "tracefem/error.hpp"

namespace tracefem {

SparseMatrix SparseMatrix::from_groups(int n, std::span<const std::vector<int>> groups) {
  // Two passes over the groups: count an upper bound per row, then fill,
  // sort and deduplicate each row in place.
  std::vector<std::size_t> bound(n + 1, 0);
  for (const auto& g : groups)
    for (int i : g) bound[i + 1] += g.size();
  for (int i = 0; i < n; ++i) bound[i + 1] += bound[i];
  std::vector<int> scratch(bound[n]);
  std::vector<std::size_t> fill(bound.begin(), bound.end() - 1);
  for (const auto& g : groups)
    for (int i : g)
      for (int j : g) scratch[fill[i]++] = j;

  SparseMatrix m;
  m.n_ = n;
  m.row_ptr_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    auto first = scratch.begin() + bound[i];
    auto last = scratch.begin() + fill[i];
    std::sort(first, last);
    last = std::unique(first, last);
    m.cols_.insert(m.cols_.end(), first, last);
    m.row_ptr_[i + 1] = m.cols_.size();
  }
  m.vals_.assign(m.cols_.size(), 0.0);
  return m;
}

SparseMatrix SparseMatrix::from_pattern(int n, std::vector<std::size_t> row_ptr,
                                        std::vector<int> cols) {
  if (static_cast<int>(row_ptr.size()) != n + 1 || row_ptr.back() != cols.size())
    throw PreconditionError("SparseMatrix: inconsistent pattern");
  SparseMatrix m;
  m.n_ = n;
  m.row_ptr_ = std::move(row_ptr);
  m.cols_ = std::move(cols);
  m.vals_.assign(m.cols_.size(), 0.0);
  return m;
}

void SparseMatrix::add_local(std::span<const int> dofs, const Eigen::MatrixXd& local, double scale) {
  const int m = static_cast<int>(dofs.size());
  for (int a = 0; a < m; ++a) {
    const int i = dofs[a];
    const auto first = cols_.begin() + row_ptr_[i];
    const auto last = cols_.begin() + row_ptr_[i + 1];
    for (int b = 0; b < m; ++b) {
      const auto it = std::lower_bound(first, last, dofs[b]);
      if (it == last || *it != dofs[b]) throw Error("SparseMatrix: entry outside pattern");
      vals_[it - cols_.begin()] += scale * local(a, b);
    }
  }
}

double SparseMatrix::coeff(int i, int j) const {
  const auto first = cols_.begin() + row_ptr_[i];
  const auto last = cols_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(first, last, j);
  return (it != last && *it == j) ? vals_[it - cols_.begin()] : 0.0;
}

void SparseMatrix::multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  y.resize(n_);
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += vals_[k] * x[cols_[k]];
    y[i] = s;
  }
}

Eigen::VectorXd SparseMatrix::operator*(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y;
  multiply(x, y);
  return y;
}

Eigen::VectorXd SparseMatrix::diagonal() const {
  Eigen::VectorXd d(n_);
  for (int i = 0; i < n_; ++i) d[i] = coeff(i, i);
  return d;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : vals_) m = std::max(m, std::abs(v));
  return m;
}

double SparseMatrix::max_asymmetry() const {
  double m = 0.0;
  for (int i = 0; i < n_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      m = std::max(m, std::abs(vals_[k] - coeff(cols_[k], i)));
  return m;
}

void SparseMatrix::prune() {
  std::size_t out = 0;
  std::vector<std::size_t> ptr(n_ + 1, 0);
  for (int i = 0; i < n_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (vals_[k] == 0.0) continue;
      cols_[out] = cols_[k];
      vals_[out] = vals_[k];
      ++out;
    }
    ptr[i + 1] = out;
  }
  cols_.resize(out);
  vals_.resize(out);
  cols_.shrink_to_fit();
  vals_.shrink_to_fit();
  row_ptr_ = std::move(ptr);
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, cols_[k]) = vals_[k];
  return d;
}

void write_coordinate(std::ostream& os, const SparseMatrix& a) {
  const auto old = os.precision(17);
  for (int i = 0; i < a.rows(); ++i)
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
      os << i << ' ' << a.cols()[k] << ' ' << a.values()[k] << '\n';
  os.precision(old);
}

}  // namespace tracefem
