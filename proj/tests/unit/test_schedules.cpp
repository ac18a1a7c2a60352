#include <doctest.h>

#include <cmath>

#include "pcrate/error.hpp"
#include "pcrate/schedules.hpp"

using namespace pcrate;
using namespace pcrate::schedules;

namespace {

ConditionParams unit_params() {
  ConditionParams p;
  p.tau = 1.0;
  p.r_prox = 1.0;
  p.sigma = 1.0;
  p.sigma_max_A2 = 1.0;
  p.sigma_min_AmAmT = 1.0;
  p.L = 1.0;
  p.gamma = 1.0;
  return p;
}

// Bisection on beta_{k+1} in (0, beta_k] for the d10 equality.
double d10_bisect(double beta, const ConditionParams& p) {
  const double c = p.sigma_min_AmAmT / p.L;
  const double target = 1.0 / (beta * beta) + c / beta;
  const auto g = [&](double b) { return 1.0 / (b * b) + (1.0 - p.gamma) * c / b - target; };
  double lo = 1e-300, hi = beta;
  for (int i = 0; i < 2000 && hi - lo > 1e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("beta_at examples") {
  const auto v25 = PenaltySchedule::maximal(1.0, Condition::V25, unit_params());
  CHECK(v25.beta_at(0) == 1.0);
  CHECK(v25.beta_at(1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  const auto c = PenaltySchedule::constant(2.5);
  for (std::size_t k : {0u, 1u, 100u}) CHECK(c.beta_at(k) == 2.5);
  const auto d10 = PenaltySchedule::maximal(1.0, Condition::D10, unit_params());
  CHECK(d10.beta_at(1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(d10.weight_rule() == WeightRule::InverseBeta);
  const auto lin = PenaltySchedule::linear(0.5, 1.0);
  CHECK(lin.beta_at(3) == doctest::Approx(2.0));
}

TEST_CASE("schedule parameter errors") {
  CHECK_THROWS_AS(PenaltySchedule::constant(0.0), ScheduleError);
  CHECK_THROWS_AS(PenaltySchedule::linear(-1.0), ScheduleError);
  CHECK_THROWS_AS(PenaltySchedule::maximal(0.0, Condition::V25, unit_params()), ScheduleError);
  CHECK_THROWS_AS(parse_condition("v99"), ScheduleError);
}

TEST_CASE("d10 closed form agrees with a bisection oracle") {
  for (double gamma : {1.0, 0.7, 0.3, 0.01}) {
    for (double c : {0.01, 1.0, 30.0}) {
      ConditionParams p = unit_params();
      p.gamma = gamma;
      p.sigma_min_AmAmT = c;
      double beta = 3.0;
      for (int k = 0; k < 50; ++k) {
        const double next = d10_next(beta, p);
        CHECK(next == doctest::Approx(d10_bisect(beta, p)).epsilon(1e-12));
        CHECK(next <= beta);
        beta = next;
      }
    }
  }
}

TEST_CASE("c14 recurrence makes the growth clause an equality and satisfies the others") {
  ConditionParams p = unit_params();
  p.sigma = 1.0;
  p.sigma_max_A2 = 7.3;
  const double sp = p.sigma / p.sigma_max_A2;
  double beta = 0.8;
  for (int k = 0; k < 200; ++k) {
    const double next = c14_next(beta, p);
    CHECK(next * next * next == doctest::Approx(beta * beta * (next + sp)).epsilon(1e-12));
    CHECK(next > beta);
    CHECK(next <= beta + sp);
    CHECK(beta * (beta + sp) >= next * next * (1.0 - 1e-12));
    beta = next;
  }
  const auto sched = PenaltySchedule::maximal(0.8, Condition::C14, p);
  CHECK(validate_schedule(sched, Condition::C14, p, 2000).empty());
}

TEST_CASE("validate_schedule examples") {
  ConditionParams p = unit_params();
  p.tau = 0.9;
  p.r_prox = 3.2;
  p.sigma = 1.0;
  for (Condition c : {Condition::V25, Condition::A16, Condition::C14, Condition::D10}) {
    const auto s = PenaltySchedule::maximal(1.0, c, p);
    CHECK_MESSAGE(validate_schedule(s, c, p, 10000).empty(), condition_name(c));
  }
  const double delta = p.sigma / (3.0 * p.tau * p.r_prox);
  CHECK(validate_schedule(PenaltySchedule::linear(delta, 1.0), Condition::V25, p, 10000).empty());
  CHECK(validate_schedule(PenaltySchedule::constant(4.0), Condition::V25, p, 100).empty());
  const auto fast = validate_schedule(PenaltySchedule::linear(10.0, 1.0), Condition::V25, p, 100);
  REQUIRE_FALSE(fast.empty());
  CHECK(fast.front().lhs < fast.front().rhs);
}

TEST_CASE("weights examples") {
  const Weights c = weights(PenaltySchedule::constant(2.0), 2);
  CHECK(c.r == std::vector<double>{2.0, 2.0, 2.0});
  CHECK(c.partial_sums.back() == 6.0);
  const Weights l = weights(PenaltySchedule::linear(1.0, 1.0), 2);
  CHECK(l.r == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(l.partial_sums.back() == 6.0);
  const Weights v = weights(PenaltySchedule::maximal(1.0, Condition::V25, unit_params()), 1);
  CHECK(v.r[1] == doctest::Approx(std::sqrt(2.0)));
  const Weights inv = weights(PenaltySchedule::constant(4.0, WeightRule::InverseBeta), 0);
  CHECK(inv.r[0] == 0.25);
}

TEST_CASE("maximal schedules grow linearly") {
  ConditionParams p = unit_params();
  p.tau = 0.9;
  p.r_prox = 2.0;
  p.sigma = 1.0;
  const std::size_t K = 1000;
  const auto v25 = PenaltySchedule::maximal(1.0, Condition::V25, p);
  const double slope = p.sigma / (2.0 * p.tau * p.r_prox);
  CHECK(std::abs(v25.weight_at(K) / static_cast<double>(K) / slope - 1.0) <= 0.25);
  const auto d10 = PenaltySchedule::maximal(1.0, Condition::D10, p);
  CHECK(d10.weight_at(K) > d10.weight_at(K / 2));
  for (std::size_t k = 0; k < 100; ++k) CHECK(d10.beta_at(k + 1) <= d10.beta_at(k));
}

TEST_CASE("linear weight sums are quadratic in K") {
  const auto s = PenaltySchedule::linear(0.3, 1.0);
  for (std::size_t K : {100u, 500u, 2000u}) {
    const double ratio = weights(s, 2 * K).partial_sums.back() / weights(s, K).partial_sums.back();
    CHECK(ratio >= 3.8);
    CHECK(ratio <= 4.2);
  }
}

TEST_CASE("memoized beta_at is order independent") {
  const auto a = PenaltySchedule::maximal(1.0, Condition::V25, unit_params());
  const auto b = PenaltySchedule::maximal(1.0, Condition::V25, unit_params());
  const double late = a.beta_at(500);
  for (std::size_t k = 0; k <= 500; ++k) b.beta_at(k);
  CHECK(b.beta_at(500) == late);
}
