#include <cmath>

#include "pcrate/error.hpp"
#include "pcrate/framework.hpp"

namespace pcrate::framework {
namespace {

void require_dim(const PcMatrices& m, const DenseVector& v, const char* what) {
  if (v.dim() != m.dim()) {
    throw ShapeError(std::string(what) + " has dim " + std::to_string(v.dim()) +
                     " but the matrices are " + m.Q.shape_string());
  }
}

double sq_norm_in(const DenseMatrix& W, const DenseVector& d) { return linalg::quad_form(W, d); }

}  // namespace

double check_cc1(const PcMatrices& m) {
  return linalg::frobenius_norm(m.Q - linalg::matmul(m.H, m.M));
}

double check_cc2(const PcMatrices& m) {
  const DenseMatrix mhm = linalg::matmul(linalg::transpose(m.M), linalg::matmul(m.H, m.M));
  return linalg::frobenius_norm(m.G - (linalg::transpose(m.Q) + m.Q - mhm));
}

double lemma2_identity_check(const PcMatrices& m, const DenseVector& v_k, const DenseVector& v_tilde,
                             const DenseVector& v_ref) {
  require_dim(m, v_k, "v_k");
  require_dim(m, v_tilde, "v_tilde");
  require_dim(m, v_ref, "v_ref");
  const DenseVector d = v_k - v_tilde;
  const DenseVector v_next = v_k - linalg::matvec(m.M, d);
  const double lhs = linalg::dot(v_ref - v_tilde, linalg::matvec(m.Q, d));
  const double rhs = 0.5 * (sq_norm_in(m.H, v_next - v_ref) - sq_norm_in(m.H, v_k - v_ref)) +
                     0.5 * sq_norm_in(m.G, d);
  return std::abs(lhs - rhs);
}

double check_cc3(const CertRecord& cert, const PcMatrices& m, const DenseMatrix& h0_next,
                 const DenseVector& v_k, const DenseVector& v_next, const DenseVector& v_tilde,
                 const DenseVector& v_ref) {
  require_dim(m, v_k, "v_k");
  require_dim(m, v_next, "v_next");
  require_dim(m, v_tilde, "v_tilde");
  require_dim(m, v_ref, "v_ref");
  const DenseVector dz = cert.z_k - cert.z_prime;
  const double z_term = cert.R.empty() ? linalg::norm_sq(dz) : sq_norm_in(cert.R, dz);
  const double lhs = cert.r_k * (sq_norm_in(m.H, v_next - v_ref) + cert.sigma_used * z_term -
                                 sq_norm_in(m.H, v_k - v_ref) + sq_norm_in(m.G, v_k - v_tilde));
  const double rhs = sq_norm_in(h0_next, v_next - v_ref) - sq_norm_in(m.H0, v_k - v_ref) +
                     cert.theta_next - cert.theta_k;
  return lhs - rhs;
}

double check_scale(const PcMatrices& m, const DenseVector& v_k, const DenseVector& v_tilde,
                   const DenseVector& v_ref) {
  return 1.0 + std::abs(sq_norm_in(m.H, v_k - v_ref)) + linalg::norm_sq(v_k - v_tilde);
}

PredictionInequality prediction_inequality(const BlockProblem& problem, const Prediction& pred,
                                           const DenseVector& v_k, const PcMatrices& m,
                                           const CertRecord& cert, const Competitor& u) {
  const double f_u = problem.objective(u.x_blocks);
  const double f_t = problem.objective(pred.x_tilde_blocks);
  const DenseVector F = residual_F(problem, pred.x_tilde_blocks, pred.lambda_tilde);
  std::vector<DenseVector> du;
  for (std::size_t i = 0; i < u.x_blocks.size(); ++i) du.push_back(u.x_blocks[i] - pred.x_tilde_blocks[i]);
  du.push_back(u.lambda - pred.lambda_tilde);
  const double uf = linalg::dot(linalg::concat(du), F);
  const double vq = linalg::dot(u.v - pred.v_tilde, linalg::matvec(m.Q, v_k - pred.v_tilde));
  const DenseVector dz = cert.z_k - u.z;
  const double zt = 0.5 * cert.sigma_used * (cert.R.empty() ? linalg::norm_sq(dz) : sq_norm_in(cert.R, dz));
  PredictionInequality out;
  out.slack = f_u - f_t + uf - vq - zt;
  out.scale = 1.0 + std::abs(f_u) + std::abs(f_t) + std::abs(uf) + std::abs(vq) + std::abs(zt);
  return out;
}

}  // namespace pcrate::framework
