#pragma once

// Lagrangian-based steppers expressed in prediction-correction form. Each
// step returns the prediction, the corrected iterate and the materialized
// Q, M, H, G, H0 of that iteration.
//
//   gpalm       one block, proximal ALM with definite D0/beta or indefinite
//               tau r beta I - beta A^T A proximal term
//   admm        two blocks, dual step gamma in (0, (1+sqrt 5)/2]
//   ladmm       two blocks, indefinite linearized x2 step, gamma = 1
//   multiblock  m >= 2 blocks, Gauss-Seidel prediction, triangular correction
//   padmm       two blocks with linear f1 and a proximal x1 step

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pcrate/framework.hpp"
#include "pcrate/linalg/solve.hpp"
#include "pcrate/problems.hpp"
#include "pcrate/schedules.hpp"

namespace pcrate::algorithms {

using framework::CertRecord;
using framework::IterateState;
using framework::PcMatrices;
using framework::Prediction;
using linalg::DenseMatrix;
using linalg::DenseVector;
using problems::BlockProblem;
using problems::SaddlePoint;

enum class MethodKind { Gpalm, Admm, Ladmm, Multiblock, Padmm };
std::string method_name(MethodKind m);
/// Throws ConfigError on unknown names.
MethodKind parse_method(const std::string& name);

enum class ProximalKind { Definite, Indefinite, IdentityScaled };
std::string proximal_kind_name(ProximalKind p);
ProximalKind parse_proximal_kind(const std::string& name);

/// padmm proximal matrix: beta I or I / beta.
enum class IdentityScale { Beta, InverseBeta };

struct MethodConfig {
  MethodKind method = MethodKind::Gpalm;
  double gamma = 1.0;
  std::optional<double> tau;
  /// Absolute r, or r = r_prox_factor * ||A||^2 (||A_2||^2 for ladmm).
  std::optional<double> r_prox;
  std::optional<double> r_prox_factor;
  ProximalKind proximal_kind = ProximalKind::Definite;
  /// Definite kind: D^k = D0 / beta^k; absent means D0 = 0.
  std::optional<DenseMatrix> D0;
  IdentityScale identity_scale = IdentityScale::Beta;
};

/// Upper end of the admissible dual step for each method.
double max_gamma(MethodKind m);

struct StepResult {
  Prediction prediction;
  IterateState next;
  PcMatrices matrices;
};

class Method {
 public:
  virtual ~Method() = default;

  MethodKind kind() const noexcept { return cfg_.method; }
  const MethodConfig& config() const noexcept { return cfg_; }
  const BlockProblem& problem() const noexcept { return problem_; }

  /// Zero primal/dual start.
  virtual IterateState initial_state() const;
  IterateState make_state(std::vector<DenseVector> x, DenseVector lambda) const;

  virtual DenseVector v_map(const std::vector<DenseVector>& x, const DenseVector& lambda) const = 0;
  /// Strong-convexity anchor z of a primal point.
  virtual DenseVector z_map(const std::vector<DenseVector>& x) const = 0;

  virtual StepResult step(const IterateState& state, double beta) const = 0;

  virtual DenseMatrix h0(double beta) const = 0;
  /// Potential term Theta of a state, given the penalties of the step that
  /// produced it (beta_prev) and of the state's own index (beta_cur).
  virtual double theta(const IterateState& state, double beta_prev, double beta_cur) const;
  virtual double sigma_used() const = 0;
  /// Whether the method carries a CC3 certificate.
  virtual bool certifies_cc3() const { return true; }
  /// Whether G is asserted PSD by the theory.
  virtual bool g_psd_asserted() const { return false; }
  virtual schedules::WeightRule natural_weight_rule() const { return schedules::WeightRule::Beta; }
  /// Parameters the schedule conditions consume, derived from the problem
  /// and configuration.
  virtual schedules::ConditionParams condition_params() const;

  /// Certificate of one step against reference point (x', lambda') = saddle.
  /// theta_k uses (beta_prev, beta); theta_next uses (beta, beta_next).
  CertRecord certify(const StepResult& res, const IterateState& before, double beta_prev, double beta,
                     double beta_next, double r_k, const SaddlePoint& saddle) const;

 protected:
  Method(MethodConfig cfg, BlockProblem problem);

  MethodConfig cfg_;
  BlockProblem problem_;
};

/// Validates cfg against the problem (block count, gamma/tau/r ranges,
/// oracle kinds) and builds the stepper. Throws ConfigError or RankError.
std::unique_ptr<Method> make_method(const MethodConfig& cfg, const BlockProblem& problem);

/// Resolved proximal parameter r (absolute or factor * squared spectral norm).
std::optional<double> resolved_r_prox(const MethodConfig& cfg, const BlockProblem& problem);

// One-shot steppers (build the method, take one step).
StepResult gpalm_step(const BlockProblem& problem, const IterateState& state, double beta,
                      const MethodConfig& cfg);
StepResult admm_step(const BlockProblem& problem, const IterateState& state, double beta,
                     const MethodConfig& cfg);
StepResult ladmm_step(const BlockProblem& problem, const IterateState& state, double beta,
                      const MethodConfig& cfg);
StepResult multiblock_step(const BlockProblem& problem, const IterateState& state, double beta,
                           const MethodConfig& cfg);
StepResult padmm_step(const BlockProblem& problem, const IterateState& state, double beta,
                      const MethodConfig& cfg);

// Structured matrices of the multi-block scheme (exposed for tests).
/// Block lower-triangular matrix of I_l blocks, (m-1) l square.
DenseMatrix multiblock_J(std::size_t m, std::size_t l);
/// [I_l ... I_l], l x (m-1) l.
DenseMatrix multiblock_Itilde(std::size_t m, std::size_t l);

}  // namespace pcrate::algorithms
