#include "internal.hpp"
#include "pcrate/error.hpp"

namespace pcrate::algorithms::detail {
namespace {

// f1(x1) = g^T x1, proximal x1 step with D = beta I or I / beta.
// v = (x1, x2, lambda), gamma = 1.
class Padmm final : public Method {
 public:
  Padmm(const MethodConfig& cfg, const BlockProblem& p) : Method(cfg, p) {
    require_blocks(p, 2, "padmm");
    if (!p.block(0).oracle.is_linear()) {
      throw UnsupportedConfigurationError("padmm requires a linear first block f1(x1) = g^T x1");
    }
    if (cfg.gamma != 1.0) throw ConfigError("padmm uses gamma = 1");
    if (cfg.proximal_kind != ProximalKind::IdentityScaled) {
      throw ConfigError("padmm requires the identity-scaled proximal kind");
    }
    n1_ = p.block(0).oracle.dim();
    n2_ = p.block(1).oracle.dim();
    l_ = p.rows();
    A1tA1_ = linalg::gram(p.block(0).A);
    A2tA2_ = linalg::gram(p.block(1).A);
    if (cfg.identity_scale == IdentityScale::Beta) {
      // beta (A1^T A1 + I) x1 = rhs: the factor does not depend on beta
      factor_ = std::make_shared<const linalg::Cholesky>(A1tA1_ + DenseMatrix::identity(n1_));
    }
  }

  DenseVector v_map(const std::vector<DenseVector>& x, const DenseVector& lambda) const override {
    return linalg::concat({x.at(0), x.at(1), lambda});
  }
  DenseVector z_map(const std::vector<DenseVector>& x) const override { return x.at(1); }

  double d_scale(double beta) const { return cfg_.identity_scale == IdentityScale::Beta ? beta : 1.0 / beta; }

  /// The x1 system matrix of iteration k (exposed through tests via step()).
  DenseMatrix x1_system(double beta) const {
    return beta * A1tA1_ + DenseMatrix::scaled_identity(n1_, d_scale(beta));
  }

  StepResult step(const IterateState& s, double beta) const override {
    const auto& b1 = problem_.block(0);
    const auto& b2 = problem_.block(1);
    const DenseVector& b = problem_.b();
    const DenseVector& x1 = s.x_blocks.at(0);
    const DenseVector& x2 = s.x_blocks.at(1);
    const DenseVector& lambda = s.lambda;
    const double ds = d_scale(beta);

    const DenseVector A2x2 = linalg::matvec(b2.A, x2);
    // g - A1^T lambda + beta A1^T (A1 x1 + A2 x2 - b) + D (x1 - x1^k) = 0
    DenseVector rhs = -b1.oracle.linear_coefficient() + linalg::matvec_t(b1.A, lambda) -
                      beta * linalg::matvec_t(b1.A, A2x2 - b) + ds * x1;
    DenseVector x1t;
    if (factor_) {
      x1t = factor_->solve((1.0 / beta) * rhs);
    } else {
      x1t = linalg::solve_linear(x1_system(beta), rhs);
    }
    const DenseVector A1x1 = linalg::matvec(b1.A, x1t);
    DenseVector lin2 = -linalg::matvec_t(b2.A, lambda) + beta * linalg::matvec_t(b2.A, A1x1 - b);
    const DenseVector x2t = problems::prox_subproblem(b2.oracle, problems::MetricMatrix{beta * A2tA2_}, lin2);

    const DenseVector lt = lambda - beta * (A1x1 + A2x2 - b);
    const DenseVector ln = lambda - beta * (A1x1 + linalg::matvec(b2.A, x2t) - b);

    StepResult out;
    out.prediction.x_tilde_blocks = {x1t, x2t};
    out.prediction.lambda_tilde = lt;
    out.prediction.v_tilde = v_map(out.prediction.x_tilde_blocks, lt);
    out.next = make_state({x1t, x2t}, ln);
    out.next.k = s.k + 1;
    out.next.prev_x_blocks = s.x_blocks;
    out.matrices = matrices(beta);
    return out;
  }

  PcMatrices matrices(double beta) const {
    const DenseMatrix& A2 = problem_.block(1).A;
    const DenseMatrix D = DenseMatrix::scaled_identity(n1_, d_scale(beta));
    const DenseMatrix BA = beta * A2tA2_;
    const DenseMatrix lam = DenseMatrix::scaled_identity(l_, 1.0 / beta);
    PcMatrices m;
    m.Q = from_blocks({{D, zeros(n1_, n2_), zeros(n1_, l_)},
                       {zeros(n2_, n1_), BA, zeros(n2_, l_)},
                       {zeros(l_, n1_), -1.0 * A2, lam}});
    m.M = from_blocks({{DenseMatrix::identity(n1_), zeros(n1_, n2_), zeros(n1_, l_)},
                       {zeros(n2_, n1_), DenseMatrix::identity(n2_), zeros(n2_, l_)},
                       {zeros(l_, n1_), (-beta) * A2, DenseMatrix::identity(l_)}});
    m.H = linalg::block_diagonal({D, BA, lam});
    m.G = linalg::block_diagonal({D, zeros(n2_, n2_), lam});
    m.H0 = m.H;
    return m;
  }

  DenseMatrix h0(double beta) const override { return matrices(beta).H; }
  bool certifies_cc3() const override { return false; }
  double sigma_used() const override { return 0.0; }
  schedules::WeightRule natural_weight_rule() const override {
    return cfg_.identity_scale == IdentityScale::Beta ? schedules::WeightRule::InverseBeta
                                                       : schedules::WeightRule::Beta;
  }

 private:
  std::size_t n1_ = 0, n2_ = 0, l_ = 0;
  DenseMatrix A1tA1_, A2tA2_;
  std::shared_ptr<const linalg::Cholesky> factor_;
};

}  // namespace

std::unique_ptr<Method> make_padmm(const MethodConfig& cfg, const BlockProblem& p) {
  return std::make_unique<Padmm>(cfg, p);
}

}  // namespace pcrate::algorithms::detail
