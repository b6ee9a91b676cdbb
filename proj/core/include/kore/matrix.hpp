#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "kore/errors.hpp"

namespace kore {

/// Dense row-major matrix of 64-bit floats. Entries are validated finite
/// whenever a matrix is constructed from data.
class Matrix {
 public:
  Matrix() = default;

  /// Zero-filled rows x cols.
  Matrix(std::size_t rows, std::size_t cols);

  /// Takes ownership of row-major data; throws ShapeError on a size
  /// mismatch and Error if any entry is NaN or infinite.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix column(std::span<const double> values);
  static Matrix diagonal(std::span<const double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  /// Re-checks the finiteness invariant after in-place mutation.
  void check_finite() const;

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Standard product; ShapeError when inner dimensions differ. Summation
/// runs in a fixed i-k-j order so results are bit-stable.
Matrix matmul(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& m);

/// sqrt of the sum of squared entries.
double frobenius(const Matrix& m);

double trace(const Matrix& m);

double max_abs(const Matrix& m);

/// Gauss-Jordan inverse with partial pivoting; NumericError when singular.
Matrix inverse(const Matrix& m);

}  // namespace kore
