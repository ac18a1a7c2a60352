#pragma once

// Penalty-parameter sequences beta^k and their ergodic weights r^k.
//
// Conditions (k >= 0, sigma' = sigma / sigma_max(A2^T A2), c = sigma_min(Am Am^T) / L):
//   v25, a16:  beta_k (tau r beta_k + sigma) >= tau r beta_{k+1}^2,  beta_{k+1} >= beta_k
//   c14:       beta_k (beta_k + sigma') >= beta_{k+1}^2,
//              beta_k^3 / (beta_k + sigma') <= beta_{k-1}^2  (k >= 1),
//              beta_{k+1} >= beta_k
//   d10:       1/beta_k^2 + c/beta_k >= 1/beta_{k+1}^2 + (1 - gamma) c / beta_{k+1}

#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

namespace pcrate::schedules {

enum class Condition { V25, C14, A16, D10 };

std::string condition_name(Condition c);
/// Throws ScheduleError on unknown names.
Condition parse_condition(const std::string& name);

struct ConditionParams {
  double tau = 1.0;
  double r_prox = 1.0;
  double sigma = 0.0;
  double sigma_max_A2 = 1.0;
  double sigma_min_AmAmT = 0.0;
  double L = 1.0;
  double gamma = 1.0;
};

enum class WeightRule { Beta, InverseBeta };

std::string weight_rule_name(WeightRule r);
WeightRule parse_weight_rule(const std::string& name);

struct Constant {
  double beta = 1.0;
};

/// beta_k = delta (k + offset)
struct Linear {
  double delta = 1.0;
  double offset = 1.0;
};

/// Equality in the named condition, started from beta0.
struct Maximal {
  double beta0 = 1.0;
  Condition condition = Condition::V25;
  ConditionParams params;
};

/// Default weight rule of a condition: 1/beta for d10, beta otherwise.
WeightRule default_weight_rule(Condition c);

class PenaltySchedule {
 public:
  using Kind = std::variant<Constant, Linear, Maximal>;

  /// Throws ScheduleError on nonpositive beta/delta/beta0 or parameters the
  /// recurrence cannot use.
  PenaltySchedule(Kind kind, WeightRule rule);

  static PenaltySchedule constant(double beta, WeightRule rule = WeightRule::Beta);
  static PenaltySchedule linear(double delta, double offset = 1.0, WeightRule rule = WeightRule::Beta);
  static PenaltySchedule maximal(double beta0, Condition condition, const ConditionParams& params);

  const Kind& kind() const noexcept { return kind_; }
  WeightRule weight_rule() const noexcept { return rule_; }

  /// beta^k. Maximal recurrences memoize their prefix.
  double beta_at(std::size_t k) const;
  double weight_at(std::size_t k) const;

 private:
  struct Memo {
    std::mutex mu;
    std::vector<double> betas;
  };

  Kind kind_;
  WeightRule rule_;
  std::shared_ptr<Memo> memo_;
};

/// Next element of each maximal recurrence (exposed for tests).
double v25_next(double beta, const ConditionParams& p);
/// Root of beta^3 = beta_k^2 (beta + sigma') in (beta_k, beta_k + sigma'].
double c14_next(double beta, const ConditionParams& p);
/// Closed-form root of t^2 + (1 - gamma) c t = 1/beta_k^2 + c/beta_k, t = 1/beta_{k+1}.
double d10_next(double beta, const ConditionParams& p);

struct Weights {
  std::vector<double> r;             // r_0 .. r_K
  std::vector<double> partial_sums;  // sum_{j<=k} r_j, compensated
};

Weights weights(const PenaltySchedule& schedule, std::size_t K);

struct Violation {
  std::size_t k = 0;
  std::string clause;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Checks every clause of the condition for k = 0..K-1 (relative slack
/// 1e-12). The c14 clause involving beta_{k-1} is applied from k = 1.
std::vector<Violation> validate_schedule(const PenaltySchedule& schedule, Condition condition,
                                         const ConditionParams& params, std::size_t K);

}  // namespace pcrate::schedules
