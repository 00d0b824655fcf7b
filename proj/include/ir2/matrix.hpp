#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ir2 {

/// Dense row-major matrix of doubles; rows are observations.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  /// Single-column matrix.
  static Matrix column_vector(std::span<const double> values);
  static Matrix from_columns(const std::vector<std::vector<double>>& columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> data() const noexcept { return data_; }

  std::vector<double> column(std::size_t c) const;
  /// Columns in the given order.
  Matrix select_columns(std::span<const std::size_t> columns) const;
  /// Rows in the given order.
  Matrix select_rows(std::span<const std::size_t> rows) const;

  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Z-score each column (sample standard deviation). Constant columns are centred only.
Matrix standardize_columns(const Matrix& x);

/// Paired response and covariates.
struct Sample {
  std::vector<double> y;
  Matrix x;
  std::vector<std::string> x_names;

  std::size_t n() const noexcept { return y.size(); }
  std::size_t p() const noexcept { return x.cols(); }

  /// Throws InputError on shape mismatch or non-finite entries.
  void validate() const;
};

}  // namespace ir2
