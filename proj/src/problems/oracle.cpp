#include <cmath>

#include "pcrate/error.hpp"
#include "pcrate/linalg/solve.hpp"
#include "pcrate/problems.hpp"

namespace pcrate::problems {
namespace {

// slack for comparing declared moduli against computed eigenvalues
double modulus_slack(double scale) { return 1e-9 * std::max(1.0, std::abs(scale)); }

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_dim(const ScalarBlockOracle& o, const DenseVector& x, const char* op) {
  if (x.dim() != o.dim()) {
    throw ShapeError(std::string(op) + ": oracle dim " + std::to_string(o.dim()) +
                     " but argument dim " + std::to_string(x.dim()));
  }
}

double soft_threshold(double c, double t) {
  if (c > t) return c - t;
  if (c < -t) return c + t;
  return 0.0;
}

}  // namespace

ScalarBlockOracle ScalarBlockOracle::quadratic(DenseMatrix P, DenseVector q, double sigma,
                                               std::optional<double> lipschitz) {
  if (!P.square() || P.rows() != q.dim()) {
    throw ShapeError("quadratic oracle: P " + P.shape_string() + " and q of dim " +
                     std::to_string(q.dim()));
  }
  if (sigma < 0.0) throw SpecError("strong convexity modulus must be >= 0");
  P = linalg::symmetrized(P);
  const auto ev = linalg::symmetric_eigenvalues(P);
  const double lo = ev.empty() ? 0.0 : ev.front();
  const double hi = ev.empty() ? 0.0 : ev.back();
  if (lo < -modulus_slack(hi)) throw SpecError("quadratic oracle: P is not positive semidefinite");
  if (sigma > lo + modulus_slack(hi)) {
    throw SpecError("declared sigma " + std::to_string(sigma) + " exceeds sigma_min(P) = " +
                    std::to_string(lo));
  }
  if (lipschitz) {
    if (!(*lipschitz > 0.0)) throw SpecError("gradient Lipschitz constant must be > 0");
    if (*lipschitz < hi - modulus_slack(hi)) {
      throw SpecError("declared L " + std::to_string(*lipschitz) + " is below sigma_max(P) = " +
                      std::to_string(hi));
    }
  }
  return ScalarBlockOracle(Quadratic{std::move(P), std::move(q)}, sigma, lipschitz);
}

ScalarBlockOracle ScalarBlockOracle::quadratic_l1(DenseVector p_diag, DenseVector q, double mu,
                                                  double sigma) {
  if (p_diag.dim() != q.dim()) throw ShapeError("quadratic-l1 oracle: diag and q dims differ");
  if (mu < 0.0) throw SpecError("l1 weight mu must be >= 0");
  if (sigma < 0.0) throw SpecError("strong convexity modulus must be >= 0");
  double lo = p_diag.dim() ? p_diag[0] : 0.0;
  double hi = lo;
  for (double p : p_diag.span()) {
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  if (lo < 0.0) throw SpecError("quadratic-l1 oracle: diagonal must be nonnegative");
  if (sigma > lo + modulus_slack(hi)) {
    throw SpecError("declared sigma " + std::to_string(sigma) + " exceeds min diagonal " +
                    std::to_string(lo));
  }
  std::optional<double> lipschitz;
  if (mu == 0.0) lipschitz = std::max(hi, 1e-300);
  return ScalarBlockOracle(QuadraticL1{std::move(p_diag), std::move(q), mu}, sigma, lipschitz);
}

ScalarBlockOracle ScalarBlockOracle::linear(DenseVector g) {
  return ScalarBlockOracle(Linear{std::move(g)}, 0.0, std::nullopt);
}

std::size_t ScalarBlockOracle::dim() const noexcept {
  return std::visit(overloaded{[](const Quadratic& k) { return k.q.dim(); },
                               [](const QuadraticL1& k) { return k.q.dim(); },
                               [](const Linear& k) { return k.g.dim(); }},
                    kind_);
}

bool ScalarBlockOracle::is_smooth() const noexcept {
  if (const auto* k = std::get_if<QuadraticL1>(&kind_)) return k->mu == 0.0;
  return true;
}

double ScalarBlockOracle::l1_weight() const noexcept {
  if (const auto* k = std::get_if<QuadraticL1>(&kind_)) return k->mu;
  return 0.0;
}

DenseMatrix ScalarBlockOracle::hessian() const {
  return std::visit(overloaded{[](const Quadratic& k) { return k.P; },
                               [](const QuadraticL1& k) { return DenseMatrix::diagonal(k.p_diag); },
                               [](const Linear& k) { return DenseMatrix(k.g.dim(), k.g.dim()); }},
                    kind_);
}

const DenseVector& ScalarBlockOracle::linear_coefficient() const {
  return std::visit(overloaded{[](const Quadratic& k) -> const DenseVector& { return k.q; },
                               [](const QuadraticL1& k) -> const DenseVector& { return k.q; },
                               [](const Linear& k) -> const DenseVector& { return k.g; }},
                    kind_);
}

DenseVector ScalarBlockOracle::smooth_gradient(const DenseVector& x) const {
  require_dim(*this, x, "smooth_gradient");
  return std::visit(overloaded{[&](const Quadratic& k) { return linalg::matvec(k.P, x) + k.q; },
                               [&](const QuadraticL1& k) {
                                 DenseVector g = k.q;
                                 for (std::size_t j = 0; j < x.dim(); ++j) g[j] += k.p_diag[j] * x[j];
                                 return g;
                               },
                               [](const Linear& k) { return k.g; }},
                    kind_);
}

double evaluate(const ScalarBlockOracle& oracle, const DenseVector& x) {
  require_dim(oracle, x, "evaluate");
  return std::visit(
      overloaded{[&](const Quadratic& k) { return 0.5 * linalg::quad_form(k.P, x) + linalg::dot(k.q, x); },
                 [&](const QuadraticL1& k) {
                   double s = 0.0;
                   for (std::size_t j = 0; j < x.dim(); ++j) {
                     s += 0.5 * k.p_diag[j] * x[j] * x[j] + k.q[j] * x[j] + k.mu * std::abs(x[j]);
                   }
                   return s;
                 },
                 [&](const Linear& k) { return linalg::dot(k.g, x); }},
      oracle.kind());
}

DenseVector prox_subproblem(const ScalarBlockOracle& oracle, const Metric& metric,
                            const DenseVector& linear_term) {
  require_dim(oracle, linear_term, "prox_subproblem");
  const std::size_t n = oracle.dim();

  if (const auto* l1 = std::get_if<QuadraticL1>(&oracle.kind())) {
    // separable: each coordinate minimises 1/2 (p_j + t_j) x^2 + c_j x + mu |x|
    DenseVector t(n);
    if (const auto* s = std::get_if<ScaledIdentity>(&metric)) {
      t = DenseVector(n, s->t);
    } else {
      const DenseMatrix& M = std::get<MetricMatrix>(metric).M;
      if (M.rows() != n || !M.square()) throw ShapeError("prox_subproblem: metric shape mismatch");
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i != j && M(i, j) != 0.0) {
            throw UnsupportedConfigurationError(
                "l1 block requires a diagonal metric for the closed-form proximal step");
          }
        }
      }
      t = M.diag();
    }
    DenseVector x(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double curv = l1->p_diag[j] + t[j];
      if (!(curv > 0.0)) {
        throw DefinitenessError("effective metric is not positive definite at coordinate " + std::to_string(j), j);
      }
      x[j] = soft_threshold(-(l1->q[j] + linear_term[j]), l1->mu) / curv;
    }
    return x;
  }

  DenseMatrix H = oracle.hessian();
  if (const auto* s = std::get_if<ScaledIdentity>(&metric)) {
    for (std::size_t j = 0; j < n; ++j) H(j, j) += s->t;
  } else {
    const DenseMatrix& M = std::get<MetricMatrix>(metric).M;
    if (M.rows() != n || !M.square()) throw ShapeError("prox_subproblem: metric shape mismatch");
    H += M;
  }
  return linalg::solve_linear(H, -(oracle.linear_coefficient() + linear_term));
}

}  // namespace pcrate::problems
