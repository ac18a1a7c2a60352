#include "pcrate/linalg/dense.hpp"

#include <algorithm>
#include <cmath>

#include "pcrate/error.hpp"
#include "pcrate/linalg/kernels.hpp"

namespace pcrate::linalg {
namespace {

void require_finite(std::span<const double> values, const char* what) {
  if (!all_finite(values)) throw NonFiniteError(std::string(what) + " contains NaN or Inf");
}

void require_same_dim(const DenseVector& a, const DenseVector& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw ShapeError(std::string(op) + ": vector dimensions " + std::to_string(a.dim()) +
                     " and " + std::to_string(b.dim()) + " differ");
  }
}

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shapes " + a.shape_string() + " and " +
                     b.shape_string() + " differ");
  }
}

}  // namespace

bool all_finite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

// ---------------------------------------------------------------- DenseVector

DenseVector::DenseVector(std::size_t dim, double fill) : data_(dim, fill) {
  require_finite(data_, "vector");
}

DenseVector::DenseVector(std::initializer_list<double> values) : data_(values) {
  require_finite(data_, "vector");
}

DenseVector::DenseVector(std::vector<double> values) : data_(std::move(values)) {
  require_finite(data_, "vector");
}

DenseVector DenseVector::segment(std::size_t offset, std::size_t len) const {
  if (offset + len > data_.size()) throw ShapeError("segment out of range");
  DenseVector out(len);
  std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(offset), len, out.data_.begin());
  return out;
}

void DenseVector::set_segment(std::size_t offset, const DenseVector& v) {
  if (offset + v.dim() > data_.size()) throw ShapeError("set_segment out of range");
  std::copy(v.data_.begin(), v.data_.end(), data_.begin() + static_cast<std::ptrdiff_t>(offset));
}

DenseVector& DenseVector::operator+=(const DenseVector& o) {
  require_same_dim(*this, o, "operator+=");
  kernels::active().axpy(1.0, o.data(), data(), dim());
  return *this;
}

DenseVector& DenseVector::operator-=(const DenseVector& o) {
  require_same_dim(*this, o, "operator-=");
  kernels::active().axpy(-1.0, o.data(), data(), dim());
  return *this;
}

DenseVector& DenseVector::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

DenseVector operator+(DenseVector a, const DenseVector& b) { return a += b; }
DenseVector operator-(DenseVector a, const DenseVector& b) { return a -= b; }
DenseVector operator-(DenseVector a) { return a *= -1.0; }
DenseVector operator*(double s, DenseVector a) { return a *= s; }
DenseVector operator*(DenseVector a, double s) { return a *= s; }

double dot(const DenseVector& a, const DenseVector& b) {
  require_same_dim(a, b, "dot");
  return kernels::active().dot(a.data(), b.data(), a.dim());
}

double norm_sq(const DenseVector& a) { return kernels::active().dot(a.data(), a.data(), a.dim()); }

double norm(const DenseVector& a) { return std::sqrt(norm_sq(a)); }

double norm_inf(const DenseVector& a) {
  double m = 0.0;
  for (double v : a.span()) m = std::max(m, std::abs(v));
  return m;
}

double norm1(const DenseVector& a) {
  double s = 0.0;
  for (double v : a.span()) s += std::abs(v);
  return s;
}

void axpy(double alpha, const DenseVector& x, DenseVector& y) {
  require_same_dim(x, y, "axpy");
  kernels::active().axpy(alpha, x.data(), y.data(), x.dim());
}

DenseVector concat(const std::vector<DenseVector>& parts) {
  std::size_t n = 0;
  for (const auto& p : parts) n += p.dim();
  DenseVector out(n);
  std::size_t off = 0;
  for (const auto& p : parts) {
    out.set_segment(off, p);
    off += p.dim();
  }
  return out;
}

std::vector<DenseVector> split(const DenseVector& v, const std::vector<std::size_t>& sizes) {
  std::vector<DenseVector> out;
  out.reserve(sizes.size());
  std::size_t off = 0;
  for (std::size_t s : sizes) {
    out.push_back(v.segment(off, s));
    off += s;
  }
  if (off != v.dim()) throw ShapeError("split: sizes do not add up to the vector dimension");
  return out;
}

// ---------------------------------------------------------------- DenseMatrix

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  require_finite(data_, "matrix");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw ShapeError("matrix entries length " + std::to_string(data_.size()) +
                     " does not match " + shape_string());
  }
  require_finite(data_, "matrix");
}

DenseMatrix DenseMatrix::identity(std::size_t n) { return scaled_identity(n, 1.0); }

DenseMatrix DenseMatrix::scaled_identity(std::size_t n, double s) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = s;
  return m;
}

DenseMatrix DenseMatrix::diagonal(const DenseVector& d) {
  DenseMatrix m(d.dim(), d.dim());
  for (std::size_t i = 0; i < d.dim(); ++i) m(i, i) = d[i];
  return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> r;
  for (const auto& row : rows) r.emplace_back(row);
  return from_rows(r);
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t nr = rows.size();
  const std::size_t nc = nr == 0 ? 0 : rows.front().size();
  std::vector<double> entries;
  entries.reserve(nr * nc);
  for (const auto& row : rows) {
    if (row.size() != nc) throw ShapeError("from_rows: ragged rows");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return DenseMatrix(nr, nc, std::move(entries));
}

DenseVector DenseMatrix::diag() const {
  const std::size_t n = std::min(rows_, cols_);
  DenseVector d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = (*this)(i, i);
  return d;
}

DenseMatrix DenseMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                               std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw ShapeError("block out of range");
  DenseMatrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  }
  return b;
}

void DenseMatrix::set_block(std::size_t r0, std::size_t c0, const DenseMatrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw ShapeError("set_block out of range");
  for (std::size_t i = 0; i < b.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& o) {
  require_same_shape(*this, o, "operator+=");
  kernels::active().axpy(1.0, o.data(), data(), data_.size());
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& o) {
  require_same_shape(*this, o, "operator-=");
  kernels::active().axpy(-1.0, o.data(), data(), data_.size());
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

std::string DenseMatrix::shape_string() const {
  return "(" + std::to_string(rows_) + "x" + std::to_string(cols_) + ")";
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: operand shapes " + a.shape_string() + " and " + b.shape_string() +
                     " are incompatible");
  }
  DenseMatrix c(a.rows(), b.cols());
  kernels::active().gemm(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols());
  return c;
}

DenseVector matvec(const DenseMatrix& a, const DenseVector& x) {
  if (a.cols() != x.dim()) {
    throw ShapeError("matvec: matrix " + a.shape_string() + " and vector of dim " +
                     std::to_string(x.dim()));
  }
  DenseVector y(a.rows());
  kernels::active().gemv(a.data(), a.rows(), a.cols(), x.data(), y.data());
  return y;
}

DenseVector matvec_t(const DenseMatrix& a, const DenseVector& x) {
  if (a.rows() != x.dim()) {
    throw ShapeError("matvec_t: matrix " + a.shape_string() + " and vector of dim " +
                     std::to_string(x.dim()));
  }
  DenseVector y(a.cols());
  kernels::active().gemv_t(a.data(), a.rows(), a.cols(), x.data(), y.data());
  return y;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

DenseMatrix gram(const DenseMatrix& a) {
  DenseMatrix g = matmul(transpose(a), a);
  // exact symmetry: copy the upper triangle down
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  }
  return g;
}

double quad_form(const DenseMatrix& a, const DenseVector& x) {
  if (!a.square() || a.cols() != x.dim()) {
    throw ShapeError("quad_form: matrix " + a.shape_string() + " and vector of dim " +
                     std::to_string(x.dim()));
  }
  return dot(x, matvec(a, x));
}

double frobenius_norm(const DenseMatrix& a) {
  const auto& e = a.entries();
  return std::sqrt(kernels::active().dot(e.data(), e.data(), e.size()));
}

DenseMatrix hconcat(const std::vector<DenseMatrix>& blocks) {
  if (blocks.empty()) return {};
  const std::size_t rows = blocks.front().rows();
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    if (b.rows() != rows) throw ShapeError("hconcat: blocks have different row counts");
    cols += b.cols();
  }
  DenseMatrix out(rows, cols);
  std::size_t c0 = 0;
  for (const auto& b : blocks) {
    out.set_block(0, c0, b);
    c0 += b.cols();
  }
  return out;
}

DenseMatrix block_diagonal(const std::vector<DenseMatrix>& blocks) {
  std::size_t rows = 0;
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  DenseMatrix out(rows, cols);
  std::size_t r0 = 0;
  std::size_t c0 = 0;
  for (const auto& b : blocks) {
    out.set_block(r0, c0, b);
    r0 += b.rows();
    c0 += b.cols();
  }
  return out;
}

}  // namespace pcrate::linalg
