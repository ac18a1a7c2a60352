#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "pcrate/error.hpp"
#include "pcrate/linalg/kernels.hpp"
#include "pcrate/linalg/solve.hpp"

using namespace pcrate;
using namespace pcrate::linalg;
using testing::max_abs_diff;
using testing::random_matrix;
using testing::random_spd;
using testing::random_vector;

namespace {

// Cyclic Jacobi rotations: slow, simple, independent of the library's
// tridiagonal QL path.
std::vector<double> jacobi_eigenvalues(DenseMatrix a) {
  const std::size_t n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

double naive_dot(const DenseVector& a, const DenseVector& b) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.dim(); ++i) s += static_cast<long double>(a[i]) * b[i];
  return static_cast<double>(s);
}

}  // namespace

TEST_CASE("vector arithmetic basics") {
  const DenseVector a{1.0, 2.0, 3.0};
  const DenseVector b{4.0, -5.0, 6.0};
  CHECK(dot(a, b) == doctest::Approx(12.0));
  CHECK(norm_sq(a) == doctest::Approx(14.0));
  CHECK(norm_inf(b) == 6.0);
  CHECK((a + b) == DenseVector{5.0, -3.0, 9.0});
  CHECK((2.0 * a) == DenseVector{2.0, 4.0, 6.0});
  const auto parts = split(concat({a, b}), {3, 3});
  CHECK(parts[0] == a);
  CHECK(parts[1] == b);
}

TEST_CASE("shape mismatches raise ShapeError") {
  CHECK_THROWS_AS(dot(DenseVector(2), DenseVector(3)), ShapeError);
  CHECK_THROWS_AS(matvec(DenseMatrix(2, 3), DenseVector(2)), ShapeError);
  CHECK_THROWS_AS(matmul(DenseMatrix(2, 3), DenseMatrix(2, 3)), ShapeError);
}

TEST_CASE("non-finite input is rejected") {
  CHECK_THROWS_AS(DenseVector(std::vector<double>{1.0, std::nan("")}), NonFiniteError);
}

TEST_CASE("matrix products against explicit loops") {
  std::mt19937_64 rng(1);
  const DenseMatrix a = random_matrix(rng, 7, 5);
  const DenseMatrix b = random_matrix(rng, 5, 4);
  const DenseMatrix c = matmul(a, b);
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 5; ++k) s += a(i, k) * b(k, j);
      CHECK(c(i, j) == doctest::Approx(s).epsilon(1e-14));
    }
  }
  const DenseVector x = random_vector(rng, 5);
  const DenseVector y = random_vector(rng, 7);
  CHECK(dot(matvec(a, x), y) == doctest::Approx(dot(x, matvec_t(a, y))).epsilon(1e-13));
  CHECK(max_abs_diff(gram(a), matmul(transpose(a), a)) < 1e-13);
}

TEST_CASE("block assembly") {
  const DenseMatrix bd = block_diagonal({DenseMatrix::identity(2), DenseMatrix::scaled_identity(1, 3.0)});
  CHECK(bd.rows() == 3);
  CHECK(bd(2, 2) == 3.0);
  CHECK(bd(0, 2) == 0.0);
  const DenseMatrix h = hconcat({DenseMatrix::identity(2), DenseMatrix(2, 1, 5.0)});
  CHECK(h.cols() == 3);
  CHECK(h(1, 2) == 5.0);
}

TEST_CASE("Cholesky solves SPD systems and reports the failing pivot") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 12;
    const DenseMatrix a = random_spd(rng, n);
    const DenseVector x = random_vector(rng, n);
    const DenseVector b = matvec(a, x);
    CHECK(max_abs_diff(Cholesky(a).solve(b), x) < 1e-10);
    CHECK(norm(matvec(a, solve_linear(a, b)) - b) <= 1e-12 * (1.0 + norm(b)));
  }
  DenseMatrix bad = DenseMatrix::identity(3);
  bad(2, 2) = -1.0;
  try {
    Cholesky c(bad);
    FAIL("expected DefinitenessError");
  } catch (const DefinitenessError& e) {
    CHECK(e.pivot() == 2);
  }
}

TEST_CASE("triangular solves") {
  const DenseMatrix l = DenseMatrix::from_rows({{2.0, 0.0}, {1.0, 4.0}});
  const DenseVector x = solve_triangular(l, DenseVector{2.0, 9.0}, Side::Lower);
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[1] == doctest::Approx(2.0));
  const DenseVector y = solve_triangular(transpose(l), DenseVector{4.0, 8.0}, Side::Upper);
  CHECK(y[1] == doctest::Approx(2.0));
  CHECK(y[0] == doctest::Approx(1.0));
  CHECK_THROWS_AS(solve_triangular(DenseMatrix(2, 2), DenseVector(2), Side::Lower), SingularityError);
}

TEST_CASE("pivoted LU on indefinite systems") {
  std::mt19937_64 rng(3);
  const DenseMatrix a = random_matrix(rng, 9, 9);
  const DenseVector x = random_vector(rng, 9);
  CHECK(max_abs_diff(PivotedLu(a).solve(matvec(a, x)), x) < 1e-9);
  CHECK_THROWS_AS(PivotedLu(DenseMatrix(3, 3)), SingularityError);
}

TEST_CASE("symmetric eigenvalues agree with a Jacobi oracle") {
  std::mt19937_64 rng(4);
  for (std::size_t n : {1u, 2u, 3u, 8u, 20u, 45u}) {
    const DenseMatrix b = random_matrix(rng, n, n);
    const DenseMatrix s = symmetrized(b + transpose(b));
    const auto ev = symmetric_eigenvalues(s);
    const auto ref = jacobi_eigenvalues(s);
    REQUIRE(ev.size() == ref.size());
    for (std::size_t i = 0; i < n; ++i) CHECK(ev[i] == doctest::Approx(ref[i]).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("spectral quantities") {
  const DenseMatrix a = DenseMatrix::from_rows({{3.0, 0.0}, {0.0, -2.0}, {0.0, 0.0}});
  CHECK(spectral_norm_sq(a) == doctest::Approx(9.0));
  CHECK(is_psd(DenseMatrix::identity(3), 0.0));
  CHECK_FALSE(is_psd(DenseMatrix::from_rows({{1.0, 2.0}, {2.0, 1.0}}), 1e-9));
  CHECK_THROWS_AS(symmetrized(DenseMatrix::from_rows({{1.0, 2.0}, {0.0, 1.0}})), SymmetryError);
}

TEST_CASE("scalar and AVX2 kernels agree") {
  const kernels::KernelTable& s = kernels::scalar_table();
  const kernels::KernelTable* v = kernels::avx2_table();
  if (v == nullptr || !kernels::isa_supported(kernels::Isa::Avx2)) {
    MESSAGE("AVX2 variant unavailable on this build or CPU; comparing scalar with itself");
    v = &s;
  }
  std::mt19937_64 rng(5);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 63u, 100u, 257u}) {
    const DenseVector a = random_vector(rng, n, 10.0);
    const DenseVector b = random_vector(rng, n, 10.0);
    const double ref = naive_dot(a, b);
    const double tol = 1e-13 * (1.0 + norm(a) * norm(b));
    CHECK(std::abs(s.dot(a.data(), b.data(), n) - ref) <= tol);
    CHECK(std::abs(v->dot(a.data(), b.data(), n) - ref) <= tol);

    DenseVector y1 = b, y2 = b;
    s.axpy(0.37, a.data(), y1.data(), n);
    v->axpy(0.37, a.data(), y2.data(), n);
    CHECK(max_abs_diff(y1, y2) <= 1e-14 * (1.0 + norm_inf(y1)));

    for (std::size_t rows : {1u, 3u, 9u}) {
      const DenseMatrix m = random_matrix(rng, rows, n);
      const DenseVector x = random_vector(rng, n);
      const DenseVector w = random_vector(rng, rows);
      DenseVector r1(rows), r2(rows), t1(n), t2(n);
      s.gemv(m.data(), rows, n, x.data(), r1.data());
      v->gemv(m.data(), rows, n, x.data(), r2.data());
      CHECK(max_abs_diff(r1, r2) <= 1e-13 * (1.0 + norm_inf(r1)) * (1.0 + static_cast<double>(n)));
      s.gemv_t(m.data(), rows, n, w.data(), t1.data());
      v->gemv_t(m.data(), rows, n, w.data(), t2.data());
      CHECK(max_abs_diff(t1, t2) <= 1e-13 * (1.0 + norm_inf(t1)) * (1.0 + static_cast<double>(rows)));
    }
    const std::size_t m = 1 + n % 7, k = n % 11 + 1;
    const DenseMatrix A = random_matrix(rng, m, k);
    const DenseMatrix B = random_matrix(rng, k, n);
    DenseMatrix c1(m, n), c2(m, n);
    s.gemm(A.data(), B.data(), c1.data(), m, k, n);
    v->gemm(A.data(), B.data(), c2.data(), m, k, n);
    CHECK(max_abs_diff(c1, c2) <= 1e-12);
  }
}

TEST_CASE("ISA selection") {
  const kernels::Isa before = kernels::active().isa;
  kernels::select_isa(kernels::Isa::Scalar);
  CHECK(kernels::active().isa == kernels::Isa::Scalar);
  if (kernels::isa_supported(kernels::Isa::Avx2)) {
    kernels::select_isa(kernels::Isa::Avx2);
    CHECK(kernels::active().isa == kernels::Isa::Avx2);
  } else {
    CHECK_THROWS_AS(kernels::select_isa(kernels::Isa::Avx2), ConfigError);
  }
  kernels::select_isa(before);
}
