#include <cmath>

#include "internal.hpp"
#include "pcrate/error.hpp"

namespace pcrate::algorithms {

DenseMatrix multiblock_J(std::size_t m, std::size_t l) {
  const std::size_t nb = m - 1;
  DenseMatrix J(nb * l, nb * l);
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      for (std::size_t d = 0; d < l; ++d) J(i * l + d, j * l + d) = 1.0;
    }
  }
  return J;
}

DenseMatrix multiblock_Itilde(std::size_t m, std::size_t l) {
  DenseMatrix I(l, (m - 1) * l);
  for (std::size_t j = 0; j + 1 < m; ++j) {
    for (std::size_t d = 0; d < l; ++d) I(d, j * l + d) = 1.0;
  }
  return I;
}

namespace detail {
namespace {

// v = (A_2 x_2, ..., A_m x_m, lambda). The y_j = A_j x_j part of v is the
// authoritative state; x_blocks carries the last prediction.
class Multiblock final : public Method {
 public:
  Multiblock(const MethodConfig& cfg, const BlockProblem& p) : Method(cfg, p) {
    if (p.num_blocks() < 2) throw ConfigError("multiblock needs m >= 2 blocks");
    require_gamma(cfg);
    m_ = p.num_blocks();
    l_ = p.rows();
    const auto& last = p.block(m_ - 1);
    if (!last.oracle.grad_lipschitz()) {
      throw ConfigError("multiblock needs a gradient-Lipschitz last block (L missing)");
    }
    L_ = *last.oracle.grad_lipschitz();
    if (last.A.rows() > last.A.cols()) {
      throw RankError("A_m is " + last.A.shape_string() + ": cannot have full row rank");
    }
    smin_ = linalg::extreme_eigenvalue(linalg::gram(linalg::transpose(last.A)), linalg::Which::Min);
    if (!(smin_ > 1e-10)) {
      throw RankError("A_m is rank deficient: sigma_min(A_m A_m^T) = " + std::to_string(smin_));
    }
    for (const auto& blk : p.blocks()) AtA_.push_back(linalg::gram(blk.A));
    J_ = multiblock_J(m_, l_);
    It_ = multiblock_Itilde(m_, l_);
  }

  DenseVector v_map(const std::vector<DenseVector>& x, const DenseVector& lambda) const override {
    std::vector<DenseVector> parts;
    for (std::size_t j = 1; j < m_; ++j) parts.push_back(linalg::matvec(problem_.block(j).A, x.at(j)));
    parts.push_back(lambda);
    return linalg::concat(parts);
  }

  DenseVector z_map(const std::vector<DenseVector>& x) const override {
    return problem_.block(m_ - 1).oracle.smooth_gradient(x.at(m_ - 1));
  }

  StepResult step(const IterateState& s, double beta) const override {
    const DenseVector& b = problem_.b();
    const std::size_t ny = (m_ - 1) * l_;
    std::vector<DenseVector> y;
    for (std::size_t j = 0; j + 1 < m_; ++j) y.push_back(s.v.segment(j * l_, l_));
    const DenseVector lambda = s.v.segment(ny, l_);

    std::vector<DenseVector> xt(m_);
    std::vector<DenseVector> Axt(m_);
    // Gauss-Seidel sweep; block j sees predicted blocks < j and old y for > j
    for (std::size_t j = 0; j < m_; ++j) {
      DenseVector rest(l_);
      for (std::size_t i = 0; i < j; ++i) rest += Axt[i];
      for (std::size_t i = j + 1; i < m_; ++i) rest += y[i - 1];
      const auto& blk = problem_.block(j);
      DenseVector lin = -linalg::matvec_t(blk.A, lambda) + beta * linalg::matvec_t(blk.A, rest - b);
      xt[j] = problems::prox_subproblem(blk.oracle, problems::MetricMatrix{beta * AtA_[j]}, lin);
      Axt[j] = linalg::matvec(blk.A, xt[j]);
    }
    DenseVector r = Axt[0] - b;
    for (const auto& yj : y) r += yj;
    const DenseVector lt = lambda - beta * r;

    StepResult out;
    out.prediction.x_tilde_blocks = xt;
    out.prediction.lambda_tilde = lt;
    out.prediction.v_tilde = v_map(xt, lt);

    // v+ = v - P^{-T} N (v - v~), applied by back substitution against P^T
    const double sb = std::sqrt(beta);
    const DenseVector d = s.v - out.prediction.v_tilde;
    DenseVector Nd(ny + l_);
    DenseVector sum_dy(l_);
    for (std::size_t i = 0; i < ny; ++i) Nd[i] = cfg_.gamma * sb * d[i];
    for (std::size_t j = 0; j + 1 < m_; ++j) sum_dy += d.segment(j * l_, l_);
    for (std::size_t i = 0; i < l_; ++i) Nd[ny + i] = cfg_.gamma * (-sb * sum_dy[i] + d[ny + i] / sb);
    const DenseVector w = linalg::solve_triangular(Pt(beta), Nd, linalg::Side::Upper);
    const DenseVector v_next = s.v - w;

    out.next.x_blocks = xt;
    out.next.prev_x_blocks = s.x_blocks;
    out.next.lambda = v_next.segment(ny, l_);
    out.next.v = v_next;
    out.next.k = s.k + 1;
    out.matrices = matrices(beta);
    return out;
  }

  // P^T = diag(sqrt(beta) J^T, I / sqrt(beta))
  DenseMatrix Pt(double beta) const {
    const double sb = std::sqrt(beta);
    return linalg::block_diagonal({sb * linalg::transpose(J_), DenseMatrix::scaled_identity(l_, 1.0 / sb)});
  }

  DenseMatrix N(double beta) const {
    const double sb = std::sqrt(beta);
    const std::size_t ny = (m_ - 1) * l_;
    return cfg_.gamma * from_blocks({{DenseMatrix::scaled_identity(ny, sb), zeros(ny, l_)},
                                     {(-sb) * It_, DenseMatrix::scaled_identity(l_, 1.0 / sb)}});
  }

  PcMatrices matrices(double beta) const {
    const double g = cfg_.gamma;
    const std::size_t ny = (m_ - 1) * l_;
    const DenseMatrix Nk = N(beta);
    const DenseMatrix PtK = Pt(beta);
    // M = P^{-T} N, column by column
    DenseMatrix M(ny + l_, ny + l_);
    for (std::size_t c = 0; c < ny + l_; ++c) {
      DenseVector col(ny + l_);
      for (std::size_t r = 0; r < ny + l_; ++r) col[r] = Nk(r, c);
      const DenseVector sol = linalg::solve_triangular(PtK, col, linalg::Side::Upper);
      for (std::size_t r = 0; r < ny + l_; ++r) M(r, c) = sol[r];
    }
    PcMatrices m;
    m.Q = from_blocks({{beta * J_, zeros(ny, l_)}, {-1.0 * It_, DenseMatrix::scaled_identity(l_, 1.0 / beta)}});
    m.M = std::move(M);
    const DenseMatrix JJt = linalg::matmul(J_, linalg::transpose(J_));
    m.H = (1.0 / g) * linalg::block_diagonal({beta * JJt, DenseMatrix::scaled_identity(l_, 1.0 / beta)});
    m.G = linalg::transpose(m.Q) + m.Q - (1.0 / g) * linalg::matmul(linalg::transpose(Nk), Nk);
    m.H0 = h0(beta);
    return m;
  }

  DenseMatrix h0(double beta) const override {
    const double g = cfg_.gamma;
    const double c = smin_ / L_;
    const DenseMatrix JJt = linalg::matmul(J_, linalg::transpose(J_));
    return (1.0 / g) *
           linalg::block_diagonal({JJt, DenseMatrix::scaled_identity(l_, 1.0 / (beta * beta) + (1.0 - g) * c / beta)});
  }

  // The prediction inequality holds with weight 1/L on ||grad f_m(x~) - grad f_m(x)||^2.
  double sigma_used() const override { return 1.0 / L_; }
  bool g_psd_asserted() const override { return true; }
  schedules::WeightRule natural_weight_rule() const override { return schedules::WeightRule::InverseBeta; }

  schedules::ConditionParams condition_params() const override {
    schedules::ConditionParams p = Method::condition_params();
    p.sigma_min_AmAmT = smin_;
    p.L = L_;
    return p;
  }

 private:
  std::size_t m_ = 0, l_ = 0;
  double L_ = 1.0, smin_ = 0.0;
  std::vector<DenseMatrix> AtA_;
  DenseMatrix J_, It_;
};

}  // namespace

std::unique_ptr<Method> make_multiblock(const MethodConfig& cfg, const BlockProblem& p) {
  return std::make_unique<Multiblock>(cfg, p);
}

}  // namespace detail
}  // namespace pcrate::algorithms
