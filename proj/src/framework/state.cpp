#include "pcrate/error.hpp"
#include "pcrate/framework.hpp"

namespace pcrate::framework {

void PcMatrices::require_consistent_shapes() const {
  const std::size_t n = Q.rows();
  for (const DenseMatrix* m : {&Q, &M, &H, &G, &H0}) {
    if (m->rows() != n || m->cols() != n) {
      throw ShapeError("PcMatrices: expected all " + std::to_string(n) + "x" + std::to_string(n) +
                       ", found " + m->shape_string());
    }
  }
}

DenseVector residual_F(const BlockProblem& problem, const std::vector<DenseVector>& x_blocks,
                       const DenseVector& lambda) {
  if (lambda.dim() != problem.rows()) {
    throw ShapeError("residual_F: lambda has dim " + std::to_string(lambda.dim()) + ", expected " +
                     std::to_string(problem.rows()));
  }
  std::vector<DenseVector> parts;
  parts.reserve(problem.num_blocks() + 1);
  for (std::size_t i = 0; i < problem.num_blocks(); ++i) {
    parts.push_back(-linalg::matvec_t(problem.block(i).A, lambda));
  }
  parts.push_back(problem.residual(x_blocks));
  return linalg::concat(parts);
}

}  // namespace pcrate::framework
