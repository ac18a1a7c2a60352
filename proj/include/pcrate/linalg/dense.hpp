#pragma once

// Dense vectors and row-major matrices sized for desk-scale problems
// (dimensions up to a few hundred). Values are immutable in the sense that
// every operation returns a fresh object; the mutating accessors exist for
// assembly code.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace pcrate::linalg {

class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t dim, double fill = 0.0);
  DenseVector(std::initializer_list<double> values);
  /// Throws NonFiniteError on NaN/Inf entries.
  explicit DenseVector(std::vector<double> values);

  std::size_t dim() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double operator[](std::size_t i) const { return data_[i]; }
  double& operator[](std::size_t i) { return data_[i]; }

  std::span<const double> span() const noexcept { return data_; }
  std::span<double> span() noexcept { return data_; }
  const double* data() const noexcept { return data_.data(); }
  double* data() noexcept { return data_.data(); }
  const std::vector<double>& values() const noexcept { return data_; }

  /// Copy of entries [offset, offset + len).
  DenseVector segment(std::size_t offset, std::size_t len) const;
  void set_segment(std::size_t offset, const DenseVector& v);

  DenseVector& operator+=(const DenseVector& o);
  DenseVector& operator-=(const DenseVector& o);
  DenseVector& operator*=(double s);

  bool operator==(const DenseVector&) const = default;

 private:
  std::vector<double> data_;
};

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Row-major entries; throws ShapeError if the length is wrong and
  /// NonFiniteError on NaN/Inf.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(const DenseVector& d);
  static DenseMatrix scaled_identity(std::size_t n, double s);
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  const double* data() const noexcept { return data_.data(); }
  double* data() noexcept { return data_.data(); }
  const std::vector<double>& entries() const noexcept { return data_; }

  DenseVector diag() const;
  DenseMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const DenseMatrix& b);

  DenseMatrix& operator+=(const DenseMatrix& o);
  DenseMatrix& operator-=(const DenseMatrix& o);
  DenseMatrix& operator*=(double s);

  bool operator==(const DenseMatrix&) const = default;

  std::string shape_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// vector arithmetic
DenseVector operator+(DenseVector a, const DenseVector& b);
DenseVector operator-(DenseVector a, const DenseVector& b);
DenseVector operator-(DenseVector a);
DenseVector operator*(double s, DenseVector a);
DenseVector operator*(DenseVector a, double s);

double dot(const DenseVector& a, const DenseVector& b);
double norm(const DenseVector& a);
double norm_sq(const DenseVector& a);
double norm_inf(const DenseVector& a);
double norm1(const DenseVector& a);
/// y += alpha * x
void axpy(double alpha, const DenseVector& x, DenseVector& y);
DenseVector concat(const std::vector<DenseVector>& parts);
/// Splits v into consecutive pieces of the given sizes.
std::vector<DenseVector> split(const DenseVector& v, const std::vector<std::size_t>& sizes);

// matrix arithmetic
DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(double s, DenseMatrix a);

/// Standard product; throws ShapeError naming both shapes on mismatch.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseVector matvec(const DenseMatrix& a, const DenseVector& x);
/// a^T x without forming the transpose.
DenseVector matvec_t(const DenseMatrix& a, const DenseVector& x);
DenseMatrix transpose(const DenseMatrix& a);
/// a^T a
DenseMatrix gram(const DenseMatrix& a);
/// x^T a x (a need not be symmetric or definite).
double quad_form(const DenseMatrix& a, const DenseVector& x);
double frobenius_norm(const DenseMatrix& a);
/// Horizontal concatenation [a_1 a_2 ...]; all blocks share the row count.
DenseMatrix hconcat(const std::vector<DenseMatrix>& blocks);
DenseMatrix block_diagonal(const std::vector<DenseMatrix>& blocks);

bool all_finite(std::span<const double> values);

}  // namespace pcrate::linalg
