#include "ir2/matrix.hpp"

#include <cmath>
#include <string>

#include "ir2/error.hpp"

namespace ir2 {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (data_.size() != rows * cols) {
    throw InputError("matrix data size " + std::to_string(data_.size()) + " does not match " +
                     std::to_string(rows) + " x " + std::to_string(cols));
  }
}

Matrix Matrix::column_vector(std::span<const double> values) {
  return Matrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

Matrix Matrix::from_columns(const std::vector<std::vector<double>>& columns) {
  if (columns.empty()) return {};
  const std::size_t rows = columns.front().size();
  Matrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw InputError("columns have different lengths");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::select_columns(std::span<const std::size_t> columns) const {
  Matrix m(rows_, columns.size());
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] >= cols_) throw InputError("column index out of range");
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < columns.size(); ++k) m(r, k) = (*this)(r, columns[k]);
  }
  return m;
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
  Matrix m(rows.size(), cols_);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= rows_) throw InputError("row index out of range");
    const auto src = row(rows[k]);
    std::copy(src.begin(), src.end(), m.row(k).begin());
  }
  return m;
}

bool Matrix::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Matrix standardize_columns(const Matrix& x) {
  Matrix out = x;
  const std::size_t n = x.rows();
  if (n == 0) return out;
  for (std::size_t c = 0; c < x.cols(); ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += x(r, c);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) ss += (x(r, c) - mean) * (x(r, c) - mean);
    const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      out(r, c) = sd > 0.0 ? (x(r, c) - mean) / sd : x(r, c) - mean;
    }
  }
  return out;
}

void Sample::validate() const {
  if (x.rows() != y.size()) {
    throw InputError("response has " + std::to_string(y.size()) + " values but X has " +
                     std::to_string(x.rows()) + " rows");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw InputError("response contains a non-finite value");
  }
  if (!x.all_finite()) throw InputError("covariates contain a non-finite value");
  if (!x_names.empty() && x_names.size() != x.cols()) {
    throw InputError("x_names does not match the number of columns");
  }
}

}  // namespace ir2
