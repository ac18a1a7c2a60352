#include <cmath>

#include "pcrate/error.hpp"
#include "pcrate/schedules.hpp"

namespace pcrate::schedules {

std::string condition_name(Condition c) {
  switch (c) {
    case Condition::V25:
      return "v25";
    case Condition::C14:
      return "c14";
    case Condition::A16:
      return "a16";
    case Condition::D10:
      return "d10";
  }
  return "unknown";
}

Condition parse_condition(const std::string& name) {
  for (Condition c : {Condition::V25, Condition::C14, Condition::A16, Condition::D10}) {
    if (condition_name(c) == name) return c;
  }
  throw ScheduleError("unknown schedule condition '" + name + "'");
}

std::string weight_rule_name(WeightRule r) { return r == WeightRule::Beta ? "beta" : "inverse-beta"; }

WeightRule parse_weight_rule(const std::string& name) {
  if (name == "beta") return WeightRule::Beta;
  if (name == "inverse-beta") return WeightRule::InverseBeta;
  throw ScheduleError("unknown weight rule '" + name + "'");
}

WeightRule default_weight_rule(Condition c) {
  return c == Condition::D10 ? WeightRule::InverseBeta : WeightRule::Beta;
}

double v25_next(double beta, const ConditionParams& p) {
  const double tr = p.tau * p.r_prox;
  return std::sqrt(beta * (tr * beta + p.sigma) / tr);
}

double c14_next(double beta, const ConditionParams& p) {
  const double s = p.sigma / p.sigma_max_A2;
  if (s == 0.0) return beta;
  // g(x) = x^3 - beta^2 (x + s) is negative at beta and nonnegative at
  // beta + s; Newton from the right end decreases monotonically to the root
  // because g is convex there.
  const double b2 = beta * beta;
  double x = beta + s;
  for (int it = 0; it < 100; ++it) {
    const double g = x * x * x - b2 * (x + s);
    const double dg = 3.0 * x * x - b2;
    const double next = x - g / dg;
    if (!(next < x)) break;
    x = next;
  }
  return std::max(x, beta);
}

double d10_next(double beta, const ConditionParams& p) {
  const double c = p.sigma_min_AmAmT / p.L;
  const double a = (1.0 - p.gamma) * c;
  const double rhs = 1.0 / (beta * beta) + c / beta;
  // positive root of t^2 + a t - rhs, in the cancellation-free form
  const double t = 2.0 * rhs / (a + std::sqrt(a * a + 4.0 * rhs));
  return 1.0 / t;
}

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw ScheduleError(std::string(what) + " must be positive and finite, got " + std::to_string(x));
  }
}

void validate_params(Condition c, const ConditionParams& p) {
  switch (c) {
    case Condition::V25:
    case Condition::A16:
      require_positive(p.tau * p.r_prox, "tau * r_prox");
      if (p.sigma < 0.0) throw ScheduleError("sigma must be >= 0");
      break;
    case Condition::C14:
      require_positive(p.sigma_max_A2, "sigma_max(A2^T A2)");
      if (p.sigma < 0.0) throw ScheduleError("sigma must be >= 0");
      break;
    case Condition::D10:
      require_positive(p.sigma_min_AmAmT, "sigma_min(Am Am^T)");
      require_positive(p.L, "L");
      if (!(p.gamma > 0.0 && p.gamma <= 1.0)) throw ScheduleError("d10 needs gamma in (0, 1]");
      break;
  }
}

}  // namespace

PenaltySchedule::PenaltySchedule(Kind kind, WeightRule rule)
    : kind_(std::move(kind)), rule_(rule), memo_(std::make_shared<Memo>()) {
  if (const auto* c = std::get_if<Constant>(&kind_)) {
    require_positive(c->beta, "constant beta");
  } else if (const auto* l = std::get_if<Linear>(&kind_)) {
    require_positive(l->delta, "linear delta");
    require_positive(l->offset, "linear offset");
  } else {
    const auto& m = std::get<Maximal>(kind_);
    require_positive(m.beta0, "beta0");
    validate_params(m.condition, m.params);
  }
}

PenaltySchedule PenaltySchedule::constant(double beta, WeightRule rule) {
  return PenaltySchedule(Constant{beta}, rule);
}

PenaltySchedule PenaltySchedule::linear(double delta, double offset, WeightRule rule) {
  return PenaltySchedule(Linear{delta, offset}, rule);
}

PenaltySchedule PenaltySchedule::maximal(double beta0, Condition condition, const ConditionParams& params) {
  return PenaltySchedule(Maximal{beta0, condition, params}, default_weight_rule(condition));
}

double PenaltySchedule::beta_at(std::size_t k) const {
  if (const auto* c = std::get_if<Constant>(&kind_)) return c->beta;
  if (const auto* l = std::get_if<Linear>(&kind_)) return l->delta * (static_cast<double>(k) + l->offset);
  const auto& m = std::get<Maximal>(kind_);
  std::lock_guard<std::mutex> lock(memo_->mu);
  auto& b = memo_->betas;
  if (b.empty()) b.push_back(m.beta0);
  while (b.size() <= k) {
    const double cur = b.back();
    double next = cur;
    switch (m.condition) {
      case Condition::V25:
      case Condition::A16:
        next = v25_next(cur, m.params);
        break;
      case Condition::C14:
        next = c14_next(cur, m.params);
        break;
      case Condition::D10:
        next = d10_next(cur, m.params);
        break;
    }
    if (!(next > 0.0) || !std::isfinite(next)) {
      throw NumericalError("schedule recurrence left (0, inf) at k = " + std::to_string(b.size()));
    }
    b.push_back(next);
  }
  return b[k];
}

double PenaltySchedule::weight_at(std::size_t k) const {
  const double b = beta_at(k);
  return rule_ == WeightRule::Beta ? b : 1.0 / b;
}

Weights weights(const PenaltySchedule& schedule, std::size_t K) {
  Weights w;
  w.r.reserve(K + 1);
  w.partial_sums.reserve(K + 1);
  double sum = 0.0, comp = 0.0;
  for (std::size_t k = 0; k <= K; ++k) {
    const double r = schedule.weight_at(k);
    const double t = sum + r;
    comp += std::abs(sum) >= std::abs(r) ? (sum - t) + r : (r - t) + sum;
    sum = t;
    w.r.push_back(r);
    w.partial_sums.push_back(sum + comp);
  }
  return w;
}

}  // namespace pcrate::schedules
