#include "internal.hpp"
#include "pcrate/error.hpp"

namespace pcrate::algorithms::detail {
namespace {

// v = (x2, lambda); x1 rides along in the state as auxiliary data.
class Admm final : public Method {
 public:
  Admm(const MethodConfig& cfg, const BlockProblem& p) : Method(cfg, p) {
    require_blocks(p, 2, "admm");
    require_gamma(cfg);
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
    DenseVector lin2 = -linalg::matvec_t(b2.A, lambda) + beta * linalg::matvec_t(b2.A, A1x1 - b);
    const DenseVector x2t = problems::prox_subproblem(b2.oracle, problems::MetricMatrix{beta * A2tA2_}, lin2);

    const DenseVector lt = lambda - beta * (A1x1 + A2x2 - b);
    const DenseVector ln = lambda - cfg_.gamma * beta * (A1x1 + linalg::matvec(b2.A, x2t) - b);

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
    const double g = cfg_.gamma;
    const DenseMatrix& A2 = problem_.block(1).A;
    const DenseMatrix In = DenseMatrix::identity(n2_);
    const DenseMatrix BA = beta * A2tA2_;
    PcMatrices m;
    m.Q = from_blocks({{BA, zeros(n2_, l_)}, {-1.0 * A2, DenseMatrix::scaled_identity(l_, 1.0 / beta)}});
    m.M = from_blocks({{In, zeros(n2_, l_)}, {(-g * beta) * A2, DenseMatrix::scaled_identity(l_, g)}});
    m.H = linalg::block_diagonal({BA, DenseMatrix::scaled_identity(l_, 1.0 / (g * beta))});
    m.G = from_blocks({{(1.0 - g) * BA, (-(1.0 - g)) * linalg::transpose(A2)},
                       {(-(1.0 - g)) * A2, DenseMatrix::scaled_identity(l_, (2.0 - g) / beta)}});
    m.H0 = h0(beta);
    return m;
  }

  DenseMatrix h0(double beta) const override {
    return linalg::block_diagonal({(beta * beta) * A2tA2_, DenseMatrix::scaled_identity(l_, 1.0 / cfg_.gamma)});
  }

  // (1 - gamma)^2 beta_{k-1}^2 ||A x^k - b||^2
  double theta(const IterateState& s, double beta_prev, double) const override {
    const double c = (1.0 - cfg_.gamma) * beta_prev;
    return c * c * linalg::norm_sq(problem_.residual(s.x_blocks));
  }

  double sigma_used() const override { return problem_.block(1).oracle.strong_convexity(); }

 private:
  std::size_t n2_ = 0, l_ = 0;
  DenseMatrix A1tA1_, A2tA2_;
};

}  // namespace

std::unique_ptr<Method> make_admm(const MethodConfig& cfg, const BlockProblem& p) {
  return std::make_unique<Admm>(cfg, p);
}

}  // namespace pcrate::algorithms::detail
