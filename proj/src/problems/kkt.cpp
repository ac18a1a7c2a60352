#include <algorithm>
#include <cmath>
#include <memory>

#include "pcrate/error.hpp"
#include "pcrate/linalg/solve.hpp"
#include "pcrate/problems.hpp"

namespace pcrate::problems {
namespace {

constexpr double kFeasibilityTol = 1e-9;
constexpr double kStationarityTol = 1e-8;

// Sign pattern over the stacked primal vector: free coordinates carry an l1
// sign (+1/-1) or 2 for "no l1 term"; fixed coordinates (0) are pinned at 0.
constexpr int kSmooth = 2;

struct Layout {
  std::vector<std::size_t> offsets;
  DenseMatrix P;         // block-diagonal Hessian of the smooth parts
  DenseVector q;         // stacked linear coefficients
  DenseVector mu;        // per-coordinate l1 weight
  DenseMatrix A;         // [A_1 ... A_m]
};

Layout make_layout(const BlockProblem& problem) {
  Layout lay;
  std::vector<DenseMatrix> hess;
  std::vector<DenseVector> qs, mus;
  std::size_t off = 0;
  for (const auto& blk : problem.blocks()) {
    lay.offsets.push_back(off);
    off += blk.oracle.dim();
    hess.push_back(blk.oracle.hessian());
    qs.push_back(blk.oracle.linear_coefficient());
    mus.emplace_back(blk.oracle.dim(), blk.oracle.l1_weight());
  }
  lay.P = linalg::block_diagonal(hess);
  lay.q = linalg::concat(qs);
  lay.mu = linalg::concat(mus);
  lay.A = problem.stacked_A();
  return lay;
}

// Solves the equality-constrained QP restricted to the free coordinates with
// the l1 terms frozen at mu * sign. Returns the stacked x and lambda.
std::pair<DenseVector, DenseVector> solve_reduced_kkt(const Layout& lay, const DenseVector& b,
                                                      const std::vector<int>& pattern) {
  const std::size_t n = lay.q.dim();
  const std::size_t l = b.dim();
  std::vector<std::size_t> free;
  for (std::size_t j = 0; j < n; ++j) {
    if (pattern[j] != 0) free.push_back(j);
  }
  const std::size_t nf = free.size();
  DenseMatrix K(nf + l, nf + l);
  DenseVector rhs(nf + l);
  for (std::size_t a = 0; a < nf; ++a) {
    const std::size_t ja = free[a];
    for (std::size_t c = 0; c < nf; ++c) K(a, c) = lay.P(ja, free[c]);
    for (std::size_t r = 0; r < l; ++r) {
      K(a, nf + r) = -lay.A(r, ja);
      K(nf + r, a) = lay.A(r, ja);
    }
    const double sgn = pattern[ja] == kSmooth ? 0.0 : static_cast<double>(pattern[ja]);
    rhs[a] = -(lay.q[ja] + lay.mu[ja] * sgn);
  }
  for (std::size_t r = 0; r < l; ++r) rhs[nf + r] = b[r];

  std::unique_ptr<linalg::PivotedLu> lu;
  try {
    lu = std::make_unique<linalg::PivotedLu>(K);
  } catch (const SingularityError& e) {
    throw DegenerateInstanceError(std::string("KKT system is singular: ") + e.what());
  }
  DenseVector sol = lu->solve(rhs);
  for (int sweep = 0; sweep < 2; ++sweep) sol += lu->solve(rhs - linalg::matvec(K, sol));

  DenseVector x(n);
  for (std::size_t a = 0; a < nf; ++a) x[free[a]] = sol[a];
  return {x, sol.segment(nf, l)};
}

SaddlePoint to_saddle(const BlockProblem& problem, const Layout& lay, const DenseVector& x,
                      const DenseVector& lambda) {
  SaddlePoint sp;
  for (std::size_t i = 0; i < problem.num_blocks(); ++i) {
    sp.x_star.push_back(x.segment(lay.offsets[i], problem.block(i).oracle.dim()));
  }
  sp.lambda_star = lambda;
  sp.objective_star = problem.objective(sp.x_star);
  return sp;
}

bool certified(const BlockProblem& problem, const SaddlePoint& sp, KktResiduals* out) {
  const KktResiduals r = kkt_residuals(problem, sp);
  if (out) *out = r;
  return r.feasibility <= kFeasibilityTol * (1.0 + linalg::norm(problem.b())) &&
         r.stationarity <= kStationarityTol;
}

[[noreturn]] void fail_certification(const KktResiduals& r) {
  throw OracleFailureError("saddle point certification failed: feasibility " +
                           std::to_string(r.feasibility) + ", stationarity " +
                           std::to_string(r.stationarity));
}

// Primal-dual active-set corrections starting from a sign pattern. Returns
// true with a certified saddle on success.
bool polish(const BlockProblem& problem, const Layout& lay, std::vector<int> pattern,
            SaddlePoint& out) {
  const std::size_t n = lay.q.dim();
  for (int round = 0; round < 50; ++round) {
    auto [x, lambda] = solve_reduced_kkt(lay, problem.b(), pattern);
    const DenseVector s = linalg::matvec_t(lay.A, lambda) - linalg::matvec(lay.P, x) - lay.q;
    bool changed = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (lay.mu[j] == 0.0) continue;
      const int p = pattern[j];
      if (p != 0 && x[j] * p < 0.0) {
        pattern[j] = 0;
        changed = true;
      } else if (p == 0 && std::abs(s[j]) > lay.mu[j]) {
        pattern[j] = s[j] > 0.0 ? 1 : -1;
        changed = true;
      }
    }
    if (!changed) {
      out = to_saddle(problem, lay, x, lambda);
      return certified(problem, out, nullptr);
    }
  }
  return false;
}

SaddlePoint l1_oracle(const BlockProblem& problem, const Layout& lay) {
  const std::size_t n = lay.q.dim();
  const std::size_t m = problem.num_blocks();
  // linearised proximal ALM: every block subproblem becomes separable with a
  // scaled-identity metric
  const double beta = 1.0;
  const double t = 1.01 * beta * std::max(linalg::spectral_norm_sq(lay.A), 1e-12);
  std::vector<DenseVector> x;
  for (const auto& blk : problem.blocks()) x.emplace_back(blk.oracle.dim());
  DenseVector lambda(problem.rows());

  const double scale = 1.0 + linalg::norm_inf(problem.b());
  constexpr int kChunk = 2000;
  constexpr int kMaxChunks = 100;
  KktResiduals last{};
  for (int chunk = 0; chunk < kMaxChunks; ++chunk) {
    for (int it = 0; it < kChunk; ++it) {
      const DenseVector r = problem.residual(x);
      std::vector<DenseVector> next;
      next.reserve(m);
      for (std::size_t i = 0; i < m; ++i) {
        const auto& blk = problem.block(i);
        DenseVector lin = beta * linalg::matvec_t(blk.A, r) - linalg::matvec_t(blk.A, lambda) - t * x[i];
        next.push_back(prox_subproblem(blk.oracle, ScaledIdentity{t}, lin));
      }
      x = std::move(next);
      lambda -= beta * problem.residual(x);
    }
    const DenseVector xs = linalg::concat(x);
    std::vector<int> pattern(n, kSmooth);
    for (std::size_t j = 0; j < n; ++j) {
      if (lay.mu[j] == 0.0) continue;
      if (std::abs(xs[j]) <= 1e-9 * scale) {
        pattern[j] = 0;
      } else {
        pattern[j] = xs[j] > 0.0 ? 1 : -1;
      }
    }
    SaddlePoint sp;
    if (polish(problem, lay, pattern, sp)) return sp;
    SaddlePoint raw;
    raw.x_star = x;
    raw.lambda_star = lambda;
    last = kkt_residuals(problem, raw);
  }
  fail_certification(last);
}

}  // namespace

SaddlePoint kkt_oracle(const BlockProblem& problem) {
  const Layout lay = make_layout(problem);
  bool has_l1 = false;
  for (const auto& blk : problem.blocks()) has_l1 = has_l1 || blk.oracle.l1_weight() > 0.0;

  if (has_l1) return l1_oracle(problem, lay);

  const std::vector<int> all_free(lay.q.dim(), kSmooth);
  auto [x, lambda] = solve_reduced_kkt(lay, problem.b(), all_free);
  SaddlePoint sp = to_saddle(problem, lay, x, lambda);
  KktResiduals r;
  if (!certified(problem, sp, &r)) fail_certification(r);
  return sp;
}

}  // namespace pcrate::problems
