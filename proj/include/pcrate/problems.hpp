#pragma once

// Problem models for equality-constrained separable convex programs
//
//   min  sum_i f_i(x_i)   s.t.  sum_i A_i x_i = b
//
// One block is the plain ALM setting, two blocks the ADMM setting, m >= 2 the
// multi-block setting. Every block objective is restricted to kinds whose
// proximal subproblems have closed-form or direct-solve solutions.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pcrate/linalg/dense.hpp"

namespace pcrate::problems {

using linalg::DenseMatrix;
using linalg::DenseVector;

/// 1/2 x^T P x + q^T x
struct Quadratic {
  DenseMatrix P;
  DenseVector q;
};

/// 1/2 x^T diag(p) x + q^T x + mu ||x||_1
struct QuadraticL1 {
  DenseVector p_diag;
  DenseVector q;
  double mu = 0.0;
};

/// g^T x
struct Linear {
  DenseVector g;
};

class ScalarBlockOracle {
 public:
  using Kind = std::variant<Quadratic, QuadraticL1, Linear>;

  /// sigma is the declared strong-convexity modulus; it must not exceed
  /// sigma_min(P). lipschitz, when given, must be >= sigma_max(P).
  static ScalarBlockOracle quadratic(DenseMatrix P, DenseVector q, double sigma,
                                     std::optional<double> lipschitz = std::nullopt);
  static ScalarBlockOracle quadratic_l1(DenseVector p_diag, DenseVector q, double mu,
                                        double sigma);
  static ScalarBlockOracle linear(DenseVector g);

  const Kind& kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept;
  double strong_convexity() const noexcept { return sigma_; }
  const std::optional<double>& grad_lipschitz() const noexcept { return lipschitz_; }

  bool is_quadratic() const noexcept { return std::holds_alternative<Quadratic>(kind_); }
  bool is_l1() const noexcept { return std::holds_alternative<QuadraticL1>(kind_); }
  bool is_linear() const noexcept { return std::holds_alternative<Linear>(kind_); }
  /// Differentiable everywhere (no l1 part, or mu == 0).
  bool is_smooth() const noexcept;
  double l1_weight() const noexcept;

  /// Hessian of the smooth part (zero for the linear kind).
  DenseMatrix hessian() const;
  /// Linear coefficient of the smooth part.
  const DenseVector& linear_coefficient() const;

  /// Gradient of the smooth part. For l1 kinds this excludes the l1 term.
  DenseVector smooth_gradient(const DenseVector& x) const;

 private:
  ScalarBlockOracle(Kind kind, double sigma, std::optional<double> lipschitz)
      : kind_(std::move(kind)), sigma_(sigma), lipschitz_(lipschitz) {}

  Kind kind_;
  double sigma_ = 0.0;
  std::optional<double> lipschitz_;
};

double evaluate(const ScalarBlockOracle& oracle, const DenseVector& x);

/// Metric of the proximal subproblem: a dense SPD matrix or t * I.
struct MetricMatrix {
  DenseMatrix M;
};
struct ScaledIdentity {
  double t = 1.0;
};
using Metric = std::variant<MetricMatrix, ScaledIdentity>;

/// argmin_x f(x) + linear_term^T x + 1/2 x^T Metric x, solved exactly.
DenseVector prox_subproblem(const ScalarBlockOracle& oracle, const Metric& metric,
                            const DenseVector& linear_term);

struct Block {
  ScalarBlockOracle oracle;
  DenseMatrix A;
};

class BlockProblem {
 public:
  BlockProblem(std::vector<Block> blocks, DenseVector b);

  std::size_t num_blocks() const noexcept { return blocks_.size(); }
  const Block& block(std::size_t i) const { return blocks_.at(i); }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  const DenseVector& b() const noexcept { return b_; }

  std::size_t rows() const noexcept { return b_.dim(); }
  std::size_t total_dim() const noexcept;
  std::vector<std::size_t> block_dims() const;

  /// [A_1 ... A_m]
  DenseMatrix stacked_A() const;
  /// sum_i A_i x_i
  DenseVector apply_A(const std::vector<DenseVector>& x) const;
  /// sum_i A_i x_i - b
  DenseVector residual(const std::vector<DenseVector>& x) const;
  double objective(const std::vector<DenseVector>& x) const;

  bool operator==(const BlockProblem& o) const;

 private:
  std::vector<Block> blocks_;
  DenseVector b_;
};

struct SaddlePoint {
  std::vector<DenseVector> x_star;
  DenseVector lambda_star;
  double objective_star = 0.0;
};

struct KktResiduals {
  double feasibility = 0.0;  // ||A x - b||
  double stationarity = 0.0; // max over blocks, inf-norm
};

/// Residuals of the saddle-point conditions; for l1 blocks the stationarity
/// entry measures the distance of A_i^T lambda - grad to the subdifferential.
KktResiduals kkt_residuals(const BlockProblem& problem, const SaddlePoint& saddle);

/// Certified saddle point of the Lagrangian. Quadratic/linear instances go
/// through a direct KKT solve; instances with l1 blocks are solved to high
/// accuracy iteratively and then polished on the identified sign pattern.
/// Throws DegenerateInstanceError or OracleFailureError.
SaddlePoint kkt_oracle(const BlockProblem& problem);

enum class Template { P1Qp, P2StronglyConvex, P2LassoLike, P3Multiblock, P2LinearQuadratic };

std::string template_name(Template t);
Template parse_template(const std::string& name);

struct InstanceSpec {
  Template templ = Template::P1Qp;
  std::vector<std::size_t> n_blocks;  // n_i
  std::size_t l = 0;
  double sigma = 1.0;
  std::optional<double> lipschitz;
  double mu = 0.5;  // l1 weight for the lasso-like template
  std::uint64_t seed = 0;
};

/// Deterministic in spec (including seed). Throws SpecError on inconsistent
/// specs.
BlockProblem generate_instance(const InstanceSpec& spec);

}  // namespace pcrate::problems
