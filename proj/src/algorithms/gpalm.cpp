#include "internal.hpp"
#include "pcrate/error.hpp"

namespace pcrate::algorithms::detail {
namespace {

// v = (x, lambda)
class Gpalm final : public Method {
 public:
  Gpalm(const MethodConfig& cfg, const BlockProblem& p) : Method(cfg, p) {
    require_blocks(p, 1, "gpalm");
    require_gamma(cfg);
    const auto& blk = p.block(0);
    n_ = blk.oracle.dim();
    l_ = p.rows();
    AtA_ = linalg::gram(blk.A);
    if (cfg.proximal_kind == ProximalKind::Indefinite) {
      if (!cfg.tau) throw ConfigError("gpalm indefinite kind needs tau");
      const double lo = (2.0 + cfg.gamma) / 4.0;
      if (*cfg.tau < lo || *cfg.tau > 1.0) {
        throw ConfigError("gpalm tau = " + std::to_string(*cfg.tau) + " outside [(2+gamma)/4, 1] = [" +
                          std::to_string(lo) + ", 1]");
      }
      const auto r = resolved_r_prox(cfg, p);
      if (!r) throw ConfigError("gpalm indefinite kind needs r_prox or r_prox_factor");
      require_r_above(*r, linalg::spectral_norm_sq(blk.A), "||A||^2");
      tr_ = *cfg.tau * *r;
      indefinite_ = true;
    } else if (cfg.proximal_kind == ProximalKind::Definite) {
      D0_ = cfg.D0 ? *cfg.D0 : DenseMatrix(n_, n_);
      if (D0_.rows() != n_ || !D0_.square()) throw ConfigError("D0 must be " + std::to_string(n_) + "x" + std::to_string(n_));
      D0_ = linalg::symmetrized(D0_);
      if (!linalg::is_psd(D0_, 1e-12 * (1.0 + linalg::frobenius_norm(D0_)))) {
        throw ConfigError("D0 must be positive semidefinite");
      }
    } else {
      throw ConfigError("gpalm supports the definite and indefinite proximal kinds");
    }
  }

  DenseVector v_map(const std::vector<DenseVector>& x, const DenseVector& lambda) const override {
    return linalg::concat({x.at(0), lambda});
  }
  DenseVector z_map(const std::vector<DenseVector>& x) const override { return x.at(0); }

  DenseMatrix D(double beta) const {
    if (indefinite_) return DenseMatrix::scaled_identity(n_, tr_ * beta) - beta * AtA_;
    return (1.0 / beta) * D0_;
  }

  StepResult step(const IterateState& s, double beta) const override {
    const auto& blk = problem_.block(0);
    const DenseVector& x = s.x_blocks.at(0);
    const DenseVector& lambda = s.lambda;
    DenseVector xt;
    if (indefinite_) {
      // D = tau r beta I - beta A^T A cancels the coupling: metric tau r beta I
      const double t = tr_ * beta;
      DenseVector lin = -linalg::matvec_t(blk.A, lambda) - t * x +
                        beta * linalg::matvec_t(blk.A, linalg::matvec(blk.A, x) - problem_.b());
      xt = problems::prox_subproblem(blk.oracle, problems::ScaledIdentity{t}, lin);
    } else {
      const DenseMatrix Dk = (1.0 / beta) * D0_;
      DenseVector lin = -linalg::matvec_t(blk.A, lambda) - beta * linalg::matvec_t(blk.A, problem_.b()) -
                        linalg::matvec(Dk, x);
      xt = problems::prox_subproblem(blk.oracle, problems::MetricMatrix{beta * AtA_ + Dk}, lin);
    }
    const DenseVector r = linalg::matvec(blk.A, xt) - problem_.b();
    const DenseVector lt = lambda - beta * r;
    const DenseVector ln = lambda - cfg_.gamma * beta * r;

    StepResult out;
    out.prediction.x_tilde_blocks = {xt};
    out.prediction.lambda_tilde = lt;
    out.prediction.v_tilde = v_map(out.prediction.x_tilde_blocks, lt);
    out.next = make_state({xt}, ln);
    out.next.k = s.k + 1;
    out.next.prev_x_blocks = s.x_blocks;
    out.matrices = matrices(beta);
    return out;
  }

  PcMatrices matrices(double beta) const {
    const double g = cfg_.gamma;
    const DenseMatrix Dk = D(beta);
    PcMatrices m;
    m.Q = linalg::block_diagonal({Dk, DenseMatrix::scaled_identity(l_, 1.0 / beta)});
    m.M = linalg::block_diagonal({DenseMatrix::identity(n_), DenseMatrix::scaled_identity(l_, g)});
    m.H = linalg::block_diagonal({Dk, DenseMatrix::scaled_identity(l_, 1.0 / (g * beta))});
    m.G = linalg::block_diagonal({Dk, DenseMatrix::scaled_identity(l_, (2.0 - g) / beta)});
    m.H0 = h0(beta);
    return m;
  }

  DenseMatrix h0(double beta) const override {
    const DenseMatrix lam = DenseMatrix::scaled_identity(l_, 1.0 / cfg_.gamma);
    if (indefinite_) {
      // beta D1 + (1 - tau) beta^2 A^T A = beta^2 (tau r I + (1 - 2 tau) A^T A)
      const double tau = *cfg_.tau;
      DenseMatrix top = DenseMatrix::scaled_identity(n_, beta * beta * tr_) +
                        (beta * beta * (1.0 - 2.0 * tau)) * AtA_;
      return linalg::block_diagonal({top, lam});
    }
    return linalg::block_diagonal({D0_, lam});
  }

  double sigma_used() const override {
    return indefinite_ ? problem_.block(0).oracle.strong_convexity() : 0.0;
  }

 private:
  std::size_t n_ = 0, l_ = 0;
  DenseMatrix AtA_;
  DenseMatrix D0_;
  double tr_ = 0.0;
  bool indefinite_ = false;
};

}  // namespace

std::unique_ptr<Method> make_gpalm(const MethodConfig& cfg, const BlockProblem& p) {
  return std::make_unique<Gpalm>(cfg, p);
}

}  // namespace pcrate::algorithms::detail
