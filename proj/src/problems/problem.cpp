#include <algorithm>
#include <cmath>

#include "pcrate/error.hpp"
#include "pcrate/problems.hpp"

namespace pcrate::problems {

BlockProblem::BlockProblem(std::vector<Block> blocks, DenseVector b)
    : blocks_(std::move(blocks)), b_(std::move(b)) {
  if (blocks_.empty()) throw SpecError("a problem needs at least one block");
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const auto& blk = blocks_[i];
    if (blk.A.rows() != b_.dim()) {
      throw ShapeError("block " + std::to_string(i) + ": A " + blk.A.shape_string() +
                       " does not have " + std::to_string(b_.dim()) + " rows");
    }
    if (blk.A.cols() != blk.oracle.dim()) {
      throw ShapeError("block " + std::to_string(i) + ": A " + blk.A.shape_string() +
                       " does not match oracle dim " + std::to_string(blk.oracle.dim()));
    }
  }
}

std::size_t BlockProblem::total_dim() const noexcept {
  std::size_t n = 0;
  for (const auto& blk : blocks_) n += blk.oracle.dim();
  return n;
}

std::vector<std::size_t> BlockProblem::block_dims() const {
  std::vector<std::size_t> d;
  d.reserve(blocks_.size());
  for (const auto& blk : blocks_) d.push_back(blk.oracle.dim());
  return d;
}

DenseMatrix BlockProblem::stacked_A() const {
  std::vector<DenseMatrix> as;
  as.reserve(blocks_.size());
  for (const auto& blk : blocks_) as.push_back(blk.A);
  return linalg::hconcat(as);
}

DenseVector BlockProblem::apply_A(const std::vector<DenseVector>& x) const {
  if (x.size() != blocks_.size()) throw ShapeError("apply_A: wrong number of blocks");
  DenseVector out(rows());
  for (std::size_t i = 0; i < blocks_.size(); ++i) out += linalg::matvec(blocks_[i].A, x[i]);
  return out;
}

DenseVector BlockProblem::residual(const std::vector<DenseVector>& x) const {
  return apply_A(x) - b_;
}

double BlockProblem::objective(const std::vector<DenseVector>& x) const {
  if (x.size() != blocks_.size()) throw ShapeError("objective: wrong number of blocks");
  double f = 0.0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) f += evaluate(blocks_[i].oracle, x[i]);
  return f;
}

bool BlockProblem::operator==(const BlockProblem& o) const {
  if (!(b_ == o.b_) || blocks_.size() != o.blocks_.size()) return false;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const auto& a = blocks_[i];
    const auto& c = o.blocks_[i];
    if (!(a.A == c.A) || a.oracle.kind().index() != c.oracle.kind().index()) return false;
    if (a.oracle.strong_convexity() != c.oracle.strong_convexity()) return false;
    if (a.oracle.grad_lipschitz() != c.oracle.grad_lipschitz()) return false;
    if (!(a.oracle.hessian() == c.oracle.hessian())) return false;
    if (!(a.oracle.linear_coefficient() == c.oracle.linear_coefficient())) return false;
    if (a.oracle.l1_weight() != c.oracle.l1_weight()) return false;
  }
  return true;
}

KktResiduals kkt_residuals(const BlockProblem& problem, const SaddlePoint& saddle) {
  KktResiduals r;
  r.feasibility = linalg::norm(problem.residual(saddle.x_star));
  for (std::size_t i = 0; i < problem.num_blocks(); ++i) {
    const auto& blk = problem.block(i);
    const DenseVector& x = saddle.x_star[i];
    // A_i^T lambda - grad(smooth part) must lie in mu * d|x|
    const DenseVector s = linalg::matvec_t(blk.A, saddle.lambda_star) - blk.oracle.smooth_gradient(x);
    const double mu = blk.oracle.l1_weight();
    for (std::size_t j = 0; j < x.dim(); ++j) {
      double dist = 0.0;
      if (mu == 0.0) {
        dist = std::abs(s[j]);
      } else if (x[j] > 0.0) {
        dist = std::abs(s[j] - mu);
      } else if (x[j] < 0.0) {
        dist = std::abs(s[j] + mu);
      } else {
        dist = std::max(0.0, std::abs(s[j]) - mu);
      }
      r.stationarity = std::max(r.stationarity, dist);
    }
  }
  return r;
}

}  // namespace pcrate::problems
