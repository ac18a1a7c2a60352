#pragma once

#include <vector>

#include "pcrate/linalg/dense.hpp"

namespace pcrate::linalg {

/// Relative symmetry tolerance used by every routine that requires a
/// symmetric argument.
inline constexpr double kSymmetryTolerance = 1e-12;

bool is_symmetric(const DenseMatrix& a, double rel_tol = kSymmetryTolerance);

/// (a + a^T) / 2. Throws SymmetryError when a is not symmetric within
/// kSymmetryTolerance relative to its largest entry.
DenseMatrix symmetrized(const DenseMatrix& a);

/// Lower Cholesky factor of a symmetric positive definite matrix. Built once,
/// solved many times; immutable after construction.
class Cholesky {
 public:
  /// Throws DefinitenessError carrying the failing pivot index.
  explicit Cholesky(const DenseMatrix& a);

  std::size_t dim() const noexcept { return l_.rows(); }
  const DenseMatrix& lower() const noexcept { return l_; }

  DenseVector solve(const DenseVector& rhs) const;

 private:
  DenseMatrix l_;
};

/// Solves a y = rhs for symmetric positive definite a (one refinement sweep
/// is applied to reach the residual contract).
DenseVector solve_linear(const DenseMatrix& a, const DenseVector& rhs);

enum class Side { Lower, Upper };

/// Forward (Lower) or back (Upper) substitution. Entries on the other side of
/// the diagonal are ignored. Throws SingularityError on a zero diagonal.
DenseVector solve_triangular(const DenseMatrix& t, const DenseVector& rhs, Side side);

/// LU with partial pivoting for general square systems (KKT matrices).
class PivotedLu {
 public:
  /// Throws SingularityError when a pivot falls below rel_pivot_tol * max|a|.
  explicit PivotedLu(const DenseMatrix& a, double rel_pivot_tol = 1e-13);

  DenseVector solve(const DenseVector& rhs) const;

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> perm_;
};

enum class Which { Max, Min };

/// All eigenvalues of a symmetric matrix in ascending order (Householder
/// tridiagonalisation followed by implicit QL).
std::vector<double> symmetric_eigenvalues(const DenseMatrix& a);

double extreme_eigenvalue(const DenseMatrix& a, Which which);

/// true iff the smallest eigenvalue is >= -tol.
bool is_psd(const DenseMatrix& a, double tol);

/// Largest singular value squared, i.e. sigma_max(a^T a).
double spectral_norm_sq(const DenseMatrix& a);

}  // namespace pcrate::linalg
