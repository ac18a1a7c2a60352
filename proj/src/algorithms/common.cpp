#include "internal.hpp"
#include "pcrate/error.hpp"

namespace pcrate::algorithms {

Method::Method(MethodConfig cfg, BlockProblem problem) : cfg_(std::move(cfg)), problem_(std::move(problem)) {}

IterateState Method::initial_state() const {
  std::vector<DenseVector> x;
  for (const auto& blk : problem_.blocks()) x.emplace_back(blk.oracle.dim());
  return make_state(std::move(x), DenseVector(problem_.rows()));
}

IterateState Method::make_state(std::vector<DenseVector> x, DenseVector lambda) const {
  IterateState s;
  s.v = v_map(x, lambda);
  s.prev_x_blocks = x;
  s.x_blocks = std::move(x);
  s.lambda = std::move(lambda);
  return s;
}

double Method::theta(const IterateState&, double, double) const { return 0.0; }

schedules::ConditionParams Method::condition_params() const {
  schedules::ConditionParams p;
  p.gamma = cfg_.gamma;
  if (cfg_.tau) p.tau = *cfg_.tau;
  if (auto r = resolved_r_prox(cfg_, problem_)) p.r_prox = *r;
  const auto& last = problem_.block(problem_.num_blocks() - 1);
  p.sigma = last.oracle.strong_convexity();
  p.sigma_max_A2 = linalg::spectral_norm_sq(last.A);
  if (last.A.rows() <= last.A.cols()) {
    p.sigma_min_AmAmT = linalg::extreme_eigenvalue(linalg::gram(linalg::transpose(last.A)), linalg::Which::Min);
  }
  if (last.oracle.grad_lipschitz()) p.L = *last.oracle.grad_lipschitz();
  return p;
}

CertRecord Method::certify(const StepResult& res, const IterateState& before, double beta_prev, double beta,
                           double beta_next, double r_k, const SaddlePoint& saddle) const {
  CertRecord c;
  c.k = before.k;
  c.r_k = r_k;
  c.theta_k = theta(before, beta_prev, beta);
  c.theta_next = theta(res.next, beta, beta_next);
  c.z_k = z_map(res.prediction.x_tilde_blocks);
  c.z_prime = z_map(saddle.x_star);
  c.R = DenseMatrix::identity(c.z_k.dim());
  c.sigma_used = sigma_used();
  c.cc1_residual = framework::check_cc1(res.matrices);
  if (certifies_cc3()) {
    const DenseVector v_ref = v_map(saddle.x_star, saddle.lambda_star);
    c.cc3_slack = framework::check_cc3(c, res.matrices, h0(beta_next), before.v, res.next.v,
                                       res.prediction.v_tilde, v_ref);
  }
  return c;
}

}  // namespace pcrate::algorithms
