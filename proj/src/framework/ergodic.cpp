#include <cmath>

#include "pcrate/error.hpp"
#include "pcrate/framework.hpp"

namespace pcrate::framework {
namespace {

// Neumaier's variant of Kahan summation
void neumaier_add(double& sum, double& comp, double x) {
  const double t = sum + x;
  if (std::abs(sum) >= std::abs(x)) {
    comp += (sum - t) + x;
  } else {
    comp += (x - t) + sum;
  }
  sum = t;
}

}  // namespace

void ErgodicAverage::add(const std::vector<DenseVector>& x_tilde, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw WeightError("ergodic weight must be positive and finite, got " + std::to_string(r));
  }
  const DenseVector x = linalg::concat(x_tilde);
  if (count_ == 0) {
    sum_.assign(x.dim(), 0.0);
    comp_.assign(x.dim(), 0.0);
  } else if (x.dim() != sum_.size()) {
    throw ShapeError("ergodic average: point of dim " + std::to_string(x.dim()) + ", expected " +
                     std::to_string(sum_.size()));
  }
  for (std::size_t i = 0; i < x.dim(); ++i) neumaier_add(sum_[i], comp_[i], r * x[i]);
  neumaier_add(weight_, weight_comp_, r);
  ++count_;
}

DenseVector ErgodicAverage::mean() const {
  if (count_ == 0) throw WeightError("ergodic average of an empty sequence");
  const double w = weight_sum();
  DenseVector out(sum_.size());
  for (std::size_t i = 0; i < sum_.size(); ++i) out[i] = (sum_[i] + comp_[i]) / w;
  return out;
}

std::vector<DenseVector> ErgodicAverage::mean_blocks(const std::vector<std::size_t>& dims) const {
  return linalg::split(mean(), dims);
}

void ergodic_update(SolverTrace& trace, const std::vector<DenseVector>& x_tilde, double r_k) {
  trace.ergodic.add(x_tilde, r_k);
  trace.ergodic_x = trace.ergodic.mean();
  trace.ergodic_weight_sum = trace.ergodic.weight_sum();
}

GapMetrics gap_metrics(const BlockProblem& problem, const std::vector<DenseVector>& x_eval,
                       const SaddlePoint& saddle) {
  const DenseVector r = problem.residual(x_eval);
  const double f = problem.objective(x_eval);
  GapMetrics g;
  g.lagrangian_gap = f - saddle.objective_star - linalg::dot(saddle.lambda_star, r);
  g.feasibility = linalg::norm(r);
  g.objective_gap = std::abs(f - saddle.objective_star);
  return g;
}

}  // namespace pcrate::framework
