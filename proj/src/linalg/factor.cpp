#include <algorithm>
#include <cmath>

#include "pcrate/error.hpp"
#include "pcrate/linalg/kernels.hpp"
#include "pcrate/linalg/solve.hpp"

namespace pcrate::linalg {
namespace {

double max_abs(const DenseMatrix& a) {
  double m = 0.0;
  for (double v : a.entries()) m = std::max(m, std::abs(v));
  return m;
}

void require_square(const DenseMatrix& a, const char* op) {
  if (!a.square()) throw ShapeError(std::string(op) + ": matrix " + a.shape_string() + " is not square");
}

}  // namespace

bool is_symmetric(const DenseMatrix& a, double rel_tol) {
  if (!a.square()) return false;
  const double tol = rel_tol * std::max(1.0, max_abs(a));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(a(i, j) - a(j, i)) > tol) return false;
    }
  }
  return true;
}

DenseMatrix symmetrized(const DenseMatrix& a) {
  require_square(a, "symmetrized");
  if (!is_symmetric(a)) throw SymmetryError("matrix " + a.shape_string() + " is not symmetric");
  DenseMatrix s = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double avg = 0.5 * (a(i, j) + a(j, i));
      s(i, j) = avg;
      s(j, i) = avg;
    }
  }
  return s;
}

// ------------------------------------------------------------------ Cholesky

Cholesky::Cholesky(const DenseMatrix& a) : l_(a.rows(), a.cols()) {
  require_square(a, "Cholesky");
  const std::size_t n = a.rows();
  const auto& k = kernels::active();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));
  const double floor = 1e-14 * std::max(max_diag, 1e-300);
  for (std::size_t j = 0; j < n; ++j) {
    const double* lj = l_.data() + j * n;
    const double d = a(j, j) - k.dot(lj, lj, j);
    if (!(d > floor)) {
      throw DefinitenessError("matrix is not positive definite: pivot " + std::to_string(j) +
                                  " is " + std::to_string(d),
                              j);
    }
    const double ljj = std::sqrt(d);
    l_(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      const double* li = l_.data() + i * n;
      l_(i, j) = (a(i, j) - k.dot(li, lj, j)) / ljj;
    }
  }
}

DenseVector Cholesky::solve(const DenseVector& rhs) const {
  const std::size_t n = dim();
  if (rhs.dim() != n) throw ShapeError("Cholesky::solve: dimension mismatch");
  const auto& k = kernels::active();
  DenseVector y = rhs;
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = (y[i] - k.dot(l_.data() + i * n, y.data(), i)) / l_(i, i);
  }
  // L^T x = y, column-oriented so that every access walks a row of L
  for (std::size_t ii = n; ii-- > 0;) {
    y[ii] /= l_(ii, ii);
    k.axpy(-y[ii], l_.data() + ii * n, y.data(), ii);
  }
  return y;
}

DenseVector solve_linear(const DenseMatrix& a, const DenseVector& rhs) {
  require_square(a, "solve_linear");
  if (rhs.dim() != a.rows()) {
    throw ShapeError("solve_linear: matrix " + a.shape_string() + " and rhs of dim " +
                     std::to_string(rhs.dim()));
  }
  const DenseMatrix s = symmetrized(a);
  const Cholesky chol(s);
  DenseVector y = chol.solve(rhs);
  y += chol.solve(rhs - matvec(s, y));
  return y;
}

DenseVector solve_triangular(const DenseMatrix& t, const DenseVector& rhs, Side side) {
  require_square(t, "solve_triangular");
  const std::size_t n = t.rows();
  if (rhs.dim() != n) throw ShapeError("solve_triangular: dimension mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (t(i, i) == 0.0) {
      throw SingularityError("triangular matrix has a zero diagonal at index " + std::to_string(i), i);
    }
  }
  const auto& k = kernels::active();
  DenseVector y = rhs;
  if (side == Side::Lower) {
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = (y[i] - k.dot(t.data() + i * n, y.data(), i)) / t(i, i);
    }
  } else {
    for (std::size_t ii = n; ii-- > 0;) {
      const double* row = t.data() + ii * n;
      y[ii] = (y[ii] - k.dot(row + ii + 1, y.data() + ii + 1, n - ii - 1)) / t(ii, ii);
    }
  }
  return y;
}

// ----------------------------------------------------------------- PivotedLu

PivotedLu::PivotedLu(const DenseMatrix& a, double rel_pivot_tol) : lu_(a), perm_(a.rows()) {
  require_square(a, "PivotedLu");
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
  const double tol = rel_pivot_tol * std::max(max_abs(a), 1e-300);
  const auto& k = kernels::active();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(lu_(r, c)) > std::abs(lu_(piv, c))) piv = r;
    }
    if (std::abs(lu_(piv, c)) <= tol) {
      throw SingularityError("matrix is singular to working precision at column " + std::to_string(c), c);
    }
    if (piv != c) {
      std::swap_ranges(lu_.data() + c * n, lu_.data() + (c + 1) * n, lu_.data() + piv * n);
      std::swap(perm_[c], perm_[piv]);
    }
    const double p = lu_(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = lu_(r, c) / p;
      lu_(r, c) = f;
      if (f != 0.0) k.axpy(-f, lu_.data() + c * n + c + 1, lu_.data() + r * n + c + 1, n - c - 1);
    }
  }
}

DenseVector PivotedLu::solve(const DenseVector& rhs) const {
  const std::size_t n = lu_.rows();
  if (rhs.dim() != n) throw ShapeError("PivotedLu::solve: dimension mismatch");
  const auto& k = kernels::active();
  DenseVector y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = rhs[perm_[i]];
  for (std::size_t i = 0; i < n; ++i) y[i] -= k.dot(lu_.data() + i * n, y.data(), i);
  for (std::size_t ii = n; ii-- > 0;) {
    const double* row = lu_.data() + ii * n;
    y[ii] = (y[ii] - k.dot(row + ii + 1, y.data() + ii + 1, n - ii - 1)) / lu_(ii, ii);
  }
  return y;
}

}  // namespace pcrate::linalg
