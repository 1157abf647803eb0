#pragma once

#include <span>
#include <vector>

namespace slafem {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed sparse row matrix. Immutable after construction; column
/// indices are strictly increasing within each row.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Builds from an unordered triplet list; duplicate entries are summed.
  static SparseMatrix from_triplets(int n_rows, int n_cols, std::vector<Triplet> triplets);
  static SparseMatrix identity(int n);

  int n_rows() const { return n_rows_; }
  int n_cols() const { return n_cols_; }
  int n_nonzeros() const { return static_cast<int>(values_.size()); }

  const std::vector<int>& row_offsets() const { return row_offsets_; }
  const std::vector<int>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }

  /// y = A x. Dimension mismatch throws std::invalid_argument.
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;

  std::vector<double> diagonal() const;
  double coefficient(int row, int col) const;  // 0 when not stored

 private:
  int n_rows_ = 0;
  int n_cols_ = 0;
  std::vector<int> row_offsets_{0};
  std::vector<int> col_indices_;
  std::vector<double> values_;
};

std::vector<double> spmv(const SparseMatrix& A, std::span<const double> x);

}  // namespace slafem
