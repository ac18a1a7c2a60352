#pragma once

#include <cmath>
#include <random>

#include "pcrate/linalg/dense.hpp"
#include "pcrate/problems.hpp"

namespace testing {

using pcrate::linalg::DenseMatrix;
using pcrate::linalg::DenseVector;

inline DenseVector random_vector(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  DenseVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

inline DenseMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  DenseMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) m(i, j) = u(rng);
  }
  return m;
}

inline DenseMatrix random_spd(std::mt19937_64& rng, std::size_t n, double shift = 1.0) {
  const DenseMatrix b = random_matrix(rng, n, n);
  return pcrate::linalg::gram(b) + DenseMatrix::scaled_identity(n, shift);
}

inline double max_abs_diff(const DenseVector& a, const DenseVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  }
  return m;
}

/// min 1/2 ||x||^2 s.t. x_1 = 1 over R^n (n >= 1).
inline pcrate::problems::BlockProblem identity_qp(std::size_t n = 1) {
  using namespace pcrate::problems;
  DenseMatrix A(1, n);
  A(0, 0) = 1.0;
  std::vector<Block> blocks;
  blocks.push_back({ScalarBlockOracle::quadratic(DenseMatrix::identity(n), DenseVector(n), 1.0, 1.0), A});
  return BlockProblem(std::move(blocks), DenseVector{1.0});
}

inline pcrate::problems::BlockProblem small_instance(pcrate::problems::Template t, std::vector<std::size_t> dims,
                                                     std::size_t l, std::uint64_t seed,
                                                     std::optional<double> L = std::nullopt) {
  pcrate::problems::InstanceSpec s;
  s.templ = t;
  s.n_blocks = std::move(dims);
  s.l = l;
  s.sigma = 1.0;
  s.lipschitz = L;
  s.seed = seed;
  return pcrate::problems::generate_instance(s);
}

}  // namespace testing
