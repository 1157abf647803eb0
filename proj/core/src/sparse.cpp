#include "slafem/sparse.hpp"

#include <algorithm>
#include <stdexcept>

namespace slafem {

SparseMatrix SparseMatrix::from_triplets(int n_rows, int n_cols, std::vector<Triplet> triplets) {
  if (n_rows < 0 || n_cols < 0) {
    throw std::invalid_argument("SparseMatrix: negative dimension");
  }
  for (const Triplet& t : triplets) {
    if (t.row < 0 || t.row >= n_rows || t.col < 0 || t.col >= n_cols) {
      throw std::invalid_argument("SparseMatrix: triplet index out of range");
    }
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix A;
  A.n_rows_ = n_rows;
  A.n_cols_ = n_cols;
  A.row_offsets_.assign(static_cast<std::size_t>(n_rows) + 1, 0);
  A.col_indices_.reserve(triplets.size());
  A.values_.reserve(triplets.size());

  std::size_t i = 0;
  for (int row = 0; row < n_rows; ++row) {
    while (i < triplets.size() && triplets[i].row == row) {
      const int col = triplets[i].col;
      double value = 0.0;
      while (i < triplets.size() && triplets[i].row == row && triplets[i].col == col) {
        value += triplets[i].value;
        ++i;
      }
      A.col_indices_.push_back(col);
      A.values_.push_back(value);
    }
    A.row_offsets_[static_cast<std::size_t>(row) + 1] = static_cast<int>(A.values_.size());
  }
  return A;
}

SparseMatrix SparseMatrix::identity(int n) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, n, std::move(t));
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (static_cast<int>(x.size()) != n_cols_ || static_cast<int>(y.size()) != n_rows_) {
    throw std::invalid_argument("SparseMatrix::multiply: dimension mismatch");
  }
  for (int row = 0; row < n_rows_; ++row) {
    double sum = 0.0;
    const int begin = row_offsets_[static_cast<std::size_t>(row)];
    const int end = row_offsets_[static_cast<std::size_t>(row) + 1];
    for (int k = begin; k < end; ++k) {
      sum += values_[static_cast<std::size_t>(k)] *
             x[static_cast<std::size_t>(col_indices_[static_cast<std::size_t>(k)])];
    }
    y[static_cast<std::size_t>(row)] = sum;
  }
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(static_cast<std::size_t>(n_rows_));
  multiply(x, y);
  return y;
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(static_cast<std::size_t>(std::min(n_rows_, n_cols_)), 0.0);
  for (int row = 0; row < static_cast<int>(d.size()); ++row) {
    d[static_cast<std::size_t>(row)] = coefficient(row, row);
  }
  return d;
}

double SparseMatrix::coefficient(int row, int col) const {
  if (row < 0 || row >= n_rows_ || col < 0 || col >= n_cols_) {
    throw std::invalid_argument("SparseMatrix::coefficient: index out of range");
  }
  const int begin = row_offsets_[static_cast<std::size_t>(row)];
  const int end = row_offsets_[static_cast<std::size_t>(row) + 1];
  const auto first = col_indices_.begin() + begin;
  const auto last = col_indices_.begin() + end;
  const auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) return 0.0;
  return values_[static_cast<std::size_t>(it - col_indices_.begin())];
}

std::vector<double> spmv(const SparseMatrix& A, std::span<const double> x) {
  return A.multiply(x);
}

}  // namespace slafem
