#include <random>

#include "pcrate/error.hpp"
#include "pcrate/linalg/solve.hpp"
#include "pcrate/problems.hpp"

namespace pcrate::problems {
namespace {

using Rng = std::mt19937_64;

DenseVector uniform_vector(Rng& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

DenseMatrix uniform_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = u(rng);
  }
  return m;
}

// P = s * B^T B + sigma I. With L given, s makes sigma_max(P) = L; otherwise
// s = 1/n keeps the spectrum O(1).
ScalarBlockOracle quadratic_block(Rng& rng, std::size_t n, double sigma,
                                  std::optional<double> lipschitz) {
  const DenseMatrix B = uniform_matrix(rng, n, n);
  const DenseVector q = uniform_vector(rng, n);
  const DenseMatrix G = linalg::gram(B);
  double s = 1.0 / static_cast<double>(n);
  if (lipschitz) {
    const double top = linalg::extreme_eigenvalue(G, linalg::Which::Max);
    s = (*lipschitz - sigma) / top;
  }
  DenseMatrix P = s * G + DenseMatrix::scaled_identity(n, sigma);
  return ScalarBlockOracle::quadratic(std::move(P), q, sigma, lipschitz);
}

ScalarBlockOracle diagonal_l1_block(Rng& rng, std::size_t n, double sigma,
                                    std::optional<double> lipschitz, double mu) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double spread = lipschitz ? *lipschitz - sigma : 1.0;
  DenseVector p(n);
  for (std::size_t j = 0; j < n; ++j) p[j] = sigma + spread * u(rng);
  const DenseVector q = uniform_vector(rng, n);
  return ScalarBlockOracle::quadratic_l1(std::move(p), q, mu, sigma);
}

std::vector<std::size_t> default_dims(Template t) {
  switch (t) {
    case Template::P1Qp:
      return {50};
    case Template::P2StronglyConvex:
    case Template::P2LassoLike:
      return {25, 25};
    case Template::P3Multiblock:
      return {10, 10, 40};
    case Template::P2LinearQuadratic:
      return {10, 25};
  }
  return {};
}

void validate(const InstanceSpec& spec, const std::vector<std::size_t>& dims, std::size_t l) {
  if (l == 0) throw SpecError("constraint count l must be positive");
  for (std::size_t n : dims) {
    if (n == 0) throw SpecError("block dimensions must be positive");
  }
  if (spec.lipschitz && *spec.lipschitz < spec.sigma) {
    throw SpecError("inconsistent spec: L = " + std::to_string(*spec.lipschitz) +
                    " is below sigma = " + std::to_string(spec.sigma));
  }
  if (spec.sigma < 0.0) throw SpecError("sigma must be >= 0");
  switch (spec.templ) {
    case Template::P1Qp:
      if (dims.size() != 1) throw SpecError("p1-qp takes exactly one block");
      if (!(spec.sigma > 0.0)) throw SpecError("p1-qp requires sigma > 0");
      break;
    case Template::P2StronglyConvex:
    case Template::P2LassoLike:
      if (dims.size() != 2) throw SpecError(template_name(spec.templ) + " takes exactly two blocks");
      if (!(spec.sigma > 0.0)) throw SpecError(template_name(spec.templ) + " requires sigma > 0");
      if (spec.templ == Template::P2LassoLike && !(spec.mu > 0.0)) {
        throw SpecError("p2-lasso-like requires mu > 0");
      }
      break;
    case Template::P2LinearQuadratic:
      if (dims.size() != 2) throw SpecError("p2-linear-quadratic takes exactly two blocks");
      if (!(spec.sigma > 0.0)) throw SpecError("p2-linear-quadratic requires sigma > 0");
      if (dims[0] > l) throw SpecError("p2-linear-quadratic needs n_1 <= l so that A_1 has full column rank");
      break;
    case Template::P3Multiblock:
      if (dims.size() < 2) throw SpecError("p3-multiblock needs at least two blocks");
      if (!spec.lipschitz) throw SpecError("p3-multiblock requires L for the last block");
      if (dims.back() < l) throw SpecError("p3-multiblock needs n_m >= l so that A_m has full row rank");
      break;
  }
}

}  // namespace

std::string template_name(Template t) {
  switch (t) {
    case Template::P1Qp:
      return "p1-qp";
    case Template::P2StronglyConvex:
      return "p2-strongly-convex";
    case Template::P2LassoLike:
      return "p2-lasso-like";
    case Template::P3Multiblock:
      return "p3-multiblock";
    case Template::P2LinearQuadratic:
      return "p2-linear-quadratic";
  }
  return "unknown";
}

Template parse_template(const std::string& name) {
  for (Template t : {Template::P1Qp, Template::P2StronglyConvex, Template::P2LassoLike,
                     Template::P3Multiblock, Template::P2LinearQuadratic}) {
    if (template_name(t) == name) return t;
  }
  throw SpecError("unknown template '" + name + "'");
}

BlockProblem generate_instance(const InstanceSpec& spec) {
  const std::vector<std::size_t> dims = spec.n_blocks.empty() ? default_dims(spec.templ) : spec.n_blocks;
  const std::size_t l = spec.l == 0 ? 20 : spec.l;
  validate(spec, dims, l);

  Rng rng(spec.seed);
  std::vector<Block> blocks;
  const std::size_t m = dims.size();
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t n = dims[i];
    switch (spec.templ) {
      case Template::P1Qp:
      case Template::P2StronglyConvex:
        blocks.push_back({quadratic_block(rng, n, spec.sigma, spec.lipschitz), uniform_matrix(rng, l, n)});
        break;
      case Template::P2LassoLike:
        if (i == 0) {
          blocks.push_back({quadratic_block(rng, n, spec.sigma, std::nullopt), uniform_matrix(rng, l, n)});
        } else {
          blocks.push_back({diagonal_l1_block(rng, n, spec.sigma, spec.lipschitz, spec.mu),
                            uniform_matrix(rng, l, n)});
        }
        break;
      case Template::P2LinearQuadratic:
        if (i == 0) {
          blocks.push_back({ScalarBlockOracle::linear(uniform_vector(rng, n)), uniform_matrix(rng, l, n)});
        } else {
          blocks.push_back({quadratic_block(rng, n, spec.sigma, spec.lipschitz), uniform_matrix(rng, l, n)});
        }
        break;
      case Template::P3Multiblock:
        if (i + 1 < m) {
          blocks.push_back({quadratic_block(rng, n, spec.sigma, std::nullopt), uniform_matrix(rng, l, n)});
        } else {
          ScalarBlockOracle last = quadratic_block(rng, n, spec.sigma, spec.lipschitz);
          DenseMatrix Am = uniform_matrix(rng, l, n);
          for (int attempt = 0; attempt < 100; ++attempt) {
            const double smin = linalg::extreme_eigenvalue(linalg::gram(linalg::transpose(Am)),
                                                           linalg::Which::Min);
            if (smin > 1e-6) break;
            Am = uniform_matrix(rng, l, n);
          }
          blocks.push_back({std::move(last), std::move(Am)});
        }
        break;
    }
  }

  std::vector<DenseVector> x_feas;
  for (std::size_t n : dims) x_feas.push_back(uniform_vector(rng, n));
  DenseVector b(l);
  for (std::size_t i = 0; i < m; ++i) b += linalg::matvec(blocks[i].A, x_feas[i]);
  return BlockProblem(std::move(blocks), std::move(b));
}

}  // namespace pcrate::problems
