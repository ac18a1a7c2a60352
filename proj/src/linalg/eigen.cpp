#include <algorithm>
#include <cmath>
#include <limits>

#include "pcrate/error.hpp"
#include "pcrate/linalg/solve.hpp"

namespace pcrate::linalg {
namespace {

// Householder reduction of a symmetric matrix to tridiagonal form. On return
// d holds the diagonal and e the superdiagonal (e[n-1] = 0).
void tridiagonalize(DenseMatrix a, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = a.rows();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  std::vector<double> v(n), w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;  // length of the column below the diagonal
    double xnorm = 0.0;
    for (std::size_t i = 0; i < m; ++i) xnorm = std::hypot(xnorm, a(k + 1 + i, k));
    if (xnorm == 0.0) continue;
    const double x0 = a(k + 1, k);
    const double alpha = x0 > 0.0 ? -xnorm : xnorm;
    for (std::size_t i = 0; i < m; ++i) v[i] = a(k + 1 + i, k);
    v[0] -= alpha;
    double vnorm = 0.0;
    for (std::size_t i = 0; i < m; ++i) vnorm = std::hypot(vnorm, v[i]);
    if (vnorm == 0.0) continue;
    for (std::size_t i = 0; i < m; ++i) v[i] /= vnorm;

    // trailing block B <- H B H with H = I - 2 v v^T
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += a(k + 1 + i, k + 1 + j) * v[j];
      w[i] = s;
    }
    double vw = 0.0;
    for (std::size_t i = 0; i < m; ++i) vw += v[i] * w[i];
    for (std::size_t i = 0; i < m; ++i) w[i] -= vw * v[i];
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        a(k + 1 + i, k + 1 + j) -= 2.0 * (v[i] * w[j] + w[i] * v[j]);
      }
    }
    a(k + 1, k) = alpha;
    a(k, k + 1) = alpha;
    for (std::size_t i = 1; i < m; ++i) {
      a(k + 1 + i, k) = 0.0;
      a(k, k + 1 + i) = 0.0;
    }
  }
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = a(i, i + 1);
}

// Implicit QL with Wilkinson-style shifts on a symmetric tridiagonal matrix.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 100) throw NumericalError("eigenvalue iteration did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i = m - 1;
        bool deflated = false;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            deflated = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (deflated) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

std::vector<double> symmetric_eigenvalues(const DenseMatrix& a) {
  const DenseMatrix s = symmetrized(a);
  if (s.rows() == 0) return {};
  std::vector<double> d, e;
  tridiagonalize(s, d, e);
  tridiagonal_ql(d, e);
  std::sort(d.begin(), d.end());
  return d;
}

double extreme_eigenvalue(const DenseMatrix& a, Which which) {
  if (!a.square() || a.rows() == 0) throw ShapeError("extreme_eigenvalue: matrix must be square and non-empty");
  const auto ev = symmetric_eigenvalues(a);
  return which == Which::Max ? ev.back() : ev.front();
}

bool is_psd(const DenseMatrix& a, double tol) {
  if (a.rows() == 0) return true;
  return extreme_eigenvalue(a, Which::Min) >= -tol;
}

double spectral_norm_sq(const DenseMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  const DenseMatrix g = a.rows() < a.cols() ? gram(transpose(a)) : gram(a);
  return std::max(0.0, extreme_eigenvalue(g, Which::Max));
}

}  // namespace pcrate::linalg
