#include <algorithm>
#include <cmath>

#include "pcrate/schedules.hpp"

namespace pcrate::schedules {
namespace {

constexpr double kRelSlack = 1e-12;

// lhs >= rhs up to relative slack
bool holds(double lhs, double rhs) {
  return lhs >= rhs - kRelSlack * std::max({std::abs(lhs), std::abs(rhs), 1e-300});
}

void expect(std::vector<Violation>& out, std::size_t k, const char* clause, double lhs, double rhs) {
  if (!holds(lhs, rhs)) out.push_back({k, clause, lhs, rhs});
}

}  // namespace

std::vector<Violation> validate_schedule(const PenaltySchedule& schedule, Condition condition,
                                         const ConditionParams& p, std::size_t K) {
  std::vector<Violation> out;
  for (std::size_t k = 0; k < K; ++k) {
    const double b = schedule.beta_at(k);
    const double bn = schedule.beta_at(k + 1);
    switch (condition) {
      case Condition::V25:
      case Condition::A16: {
        const double tr = p.tau * p.r_prox;
        expect(out, k, "beta_k (tau r beta_k + sigma) >= tau r beta_{k+1}^2", b * (tr * b + p.sigma), tr * bn * bn);
        expect(out, k, "beta_{k+1} >= beta_k", bn, b);
        break;
      }
      case Condition::C14: {
        const double s = p.sigma / p.sigma_max_A2;
        expect(out, k, "beta_k (beta_k + sigma') >= beta_{k+1}^2", b * (b + s), bn * bn);
        if (k >= 1) {
          const double bp = schedule.beta_at(k - 1);
          expect(out, k, "beta_k^3 / (beta_k + sigma') <= beta_{k-1}^2", bp * bp, b * b * b / (b + s));
        }
        expect(out, k, "beta_{k+1} >= beta_k", bn, b);
        break;
      }
      case Condition::D10: {
        const double c = p.sigma_min_AmAmT / p.L;
        expect(out, k, "1/beta_k^2 + c/beta_k >= 1/beta_{k+1}^2 + (1-gamma) c/beta_{k+1}",
               1.0 / (b * b) + c / b, 1.0 / (bn * bn) + (1.0 - p.gamma) * c / bn);
        break;
      }
    }
  }
  return out;
}

}  // namespace pcrate::schedules
