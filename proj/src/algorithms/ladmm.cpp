#include "internal.hpp"
#include "pcrate/error.hpp"

namespace pcrate::algorithms::detail {
namespace {

// v = (x2, lambda); D = tau r beta I - beta A2^T A2 on the x2 step, gamma = 1.
class Ladmm final : public Method {
 public:
  Ladmm(const MethodConfig& cfg, const BlockProblem& p) : Method(cfg, p) {
    require_blocks(p, 2, "ladmm");
    if (cfg.gamma != 1.0) throw ConfigError("ladmm uses gamma = 1");
    if (cfg.proximal_kind != ProximalKind::Indefinite) throw ConfigError("ladmm requires the indefinite proximal kind");
    if (!cfg.tau) throw ConfigError("ladmm needs tau");
    if (*cfg.tau < 0.75 || *cfg.tau > 1.0) {
      throw ConfigError("ladmm tau = " + std::to_string(*cfg.tau) + " outside [3/4, 1]");
    }
    const auto r = resolved_r_prox(cfg, p);
    if (!r) throw ConfigError("ladmm needs r_prox or r_prox_factor");
    require_r_above(*r, linalg::spectral_norm_sq(p.block(1).A), "||A_2||^2");
    tau_ = *cfg.tau;
    r_ = *r;
    n2_ = p.block(1).oracle.dim();
    l_ = p.rows();
    A1tA1_ = linalg::gram(p.block(0).A);
    A2tA2_ = linalg::gram(p.block(1).A);
  }

  DenseVector v_map(const std::vector<DenseVector>& x, const DenseVector& lambda) const override {
    return linalg::concat({x.at(1), lambda});
  }
  DenseVector z_map(const std::vector<DenseVector>& x) const override { return x.at(1); }

  StepResult step(const IterateState& s, double beta) const override {
    const auto& b1 = problem_.block(0);
    const auto& b2 = problem_.block(1);
    const DenseVector& b = problem_.b();
    const DenseVector& x2 = s.x_blocks.at(1);
    const DenseVector& lambda = s.lambda;

    const DenseVector A2x2 = linalg::matvec(b2.A, x2);
    DenseVector lin1 = -linalg::matvec_t(b1.A, lambda) + beta * linalg::matvec_t(b1.A, A2x2 - b);
    const DenseVector x1t = problems::prox_subproblem(b1.oracle, problems::MetricMatrix{beta * A1tA1_}, lin1);
    const DenseVector A1x1 = linalg::matvec(b1.A, x1t);
    const double t = tau_ * r_ * beta;
    DenseVector lin2 =
        -linalg::matvec_t(b2.A, lambda) + beta * linalg::matvec_t(b2.A, A1x1 + A2x2 - b) - t * x2;
    const DenseVector x2t = problems::prox_subproblem(b2.oracle, problems::ScaledIdentity{t}, lin2);

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
    const double t = tau_ * r_ * beta;
    const DenseMatrix D = DenseMatrix::scaled_identity(n2_, t) - beta * A2tA2_;
    const DenseMatrix lam = DenseMatrix::scaled_identity(l_, 1.0 / beta);
    PcMatrices m;
    m.Q = from_blocks({{DenseMatrix::scaled_identity(n2_, t), zeros(n2_, l_)}, {-1.0 * A2, lam}});
    m.M = from_blocks({{DenseMatrix::identity(n2_), zeros(n2_, l_)}, {(-beta) * A2, DenseMatrix::identity(l_)}});
    m.H = linalg::block_diagonal({DenseMatrix::scaled_identity(n2_, t), lam});
    m.G = linalg::block_diagonal({D, lam});
    m.H0 = h0(beta);
    return m;
  }

  DenseMatrix h0(double beta) const override {
    return linalg::block_diagonal(
        {DenseMatrix::scaled_identity(n2_, tau_ * r_ * beta * beta), DenseMatrix::identity(l_)});
  }

  // 1/2 ||x2^{k-1} - x2^k||^2 in tau beta D1 + (1 - tau) beta^2 A2^T A2
  //   = beta^2 (tau r I + (1 - 2 tau) A2^T A2), D1 = r beta I - beta A2^T A2
  double theta(const IterateState& s, double, double beta_cur) const override {
    const DenseVector d = s.prev_x_blocks.at(1) - s.x_blocks.at(1);
    const double b2 = beta_cur * beta_cur;
    return 0.5 * b2 * (tau_ * r_ * linalg::norm_sq(d) + (1.0 - 2.0 * tau_) * linalg::quad_form(A2tA2_, d));
  }

  double sigma_used() const override { return problem_.block(1).oracle.strong_convexity(); }

 private:
  double tau_ = 1.0, r_ = 1.0;
  std::size_t n2_ = 0, l_ = 0;
  DenseMatrix A1tA1_, A2tA2_;
};

}  // namespace

std::unique_ptr<Method> make_ladmm(const MethodConfig& cfg, const BlockProblem& p) {
  return std::make_unique<Ladmm>(cfg, p);
}

}  // namespace pcrate::algorithms::detail
