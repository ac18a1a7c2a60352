// One line per acceptance criterion; exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include "pcrate/bench.hpp"
#include "pcrate/error.hpp"
#include "pcrate/linalg/solve.hpp"

using namespace pcrate;
using bench::Check;
using bench::ExperimentSpec;
using bench::Metric;
using bench::ScheduleSpec;
using linalg::DenseVector;

namespace {

const bench::Window kWindow{50.0, 2000.0};
constexpr std::size_t kK = 2000;
constexpr std::uint64_t kInstanceSeed = 20240607;

int failures = 0;
std::map<int, std::string> lines;  // printed in criterion order at the end

void report(int id, bool pass, const std::string& detail) {
  lines[id] = std::string(pass ? "PASS" : "FAIL") + "  " + detail;
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fit_str(const bench::RateFit& f) {
  return "slope=" + fmt("%.3f", f.slope) + " r2=" + fmt("%.4f", f.r_squared) + " points=" + std::to_string(f.points);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const std::set<Check> kAllChecks = {Check::Cc1, Check::Cc2, Check::Lemma2, Check::Cc3, Check::PredictionInequality,
                                    Check::GPsd};

problems::InstanceSpec instance(problems::Template t, std::vector<std::size_t> n, std::size_t l,
                                std::optional<double> L = std::nullopt, std::uint64_t seed = kInstanceSeed) {
  problems::InstanceSpec s;
  s.templ = t;
  s.n_blocks = std::move(n);
  s.l = l;
  s.sigma = 1.0;
  s.lipschitz = L;
  s.seed = seed;
  return s;
}

ExperimentSpec base(problems::InstanceSpec inst, algorithms::MethodConfig m, ScheduleSpec sched) {
  ExperimentSpec s;
  s.problem = std::move(inst);
  s.method = std::move(m);
  s.schedule = sched;
  s.iterations = kK;
  s.record_every = 1;
  s.checks = kAllChecks;
  s.competitors = 50;
  s.seed = 1;
  return s;
}

ScheduleSpec maximal(schedules::Condition c) {
  ScheduleSpec s;
  s.kind = ScheduleSpec::Kind::Maximal;
  s.beta0 = 1.0;
  s.condition = c;
  return s;
}

ScheduleSpec constant(double beta) {
  ScheduleSpec s;
  s.kind = ScheduleSpec::Kind::Constant;
  s.beta = beta;
  return s;
}

algorithms::MethodConfig gpalm_indefinite() {
  algorithms::MethodConfig m;
  m.method = algorithms::MethodKind::Gpalm;
  m.proximal_kind = algorithms::ProximalKind::Indefinite;
  m.tau = 0.9;
  m.gamma = 1.0;
  m.r_prox_factor = 1.05;
  return m;
}

algorithms::MethodConfig admm(double gamma) {
  algorithms::MethodConfig m;
  m.method = algorithms::MethodKind::Admm;
  m.gamma = gamma;
  return m;
}

algorithms::MethodConfig ladmm() {
  algorithms::MethodConfig m;
  m.method = algorithms::MethodKind::Ladmm;
  m.proximal_kind = algorithms::ProximalKind::Indefinite;
  m.tau = 0.75;
  m.r_prox_factor = 1.05;
  return m;
}

algorithms::MethodConfig multiblock(double gamma = 1.0) {
  algorithms::MethodConfig m;
  m.method = algorithms::MethodKind::Multiblock;
  m.gamma = gamma;
  return m;
}

algorithms::MethodConfig padmm() {
  algorithms::MethodConfig m;
  m.method = algorithms::MethodKind::Padmm;
  m.proximal_kind = algorithms::ProximalKind::IdentityScaled;
  return m;
}

struct CheckSummary {
  double cc1 = 0.0;      // worst residual / bound
  double lemma2 = 0.0;   // worst value / scale
  double cc3 = 1e300;    // worst slack / scale
  double pred = 1e300;   // worst normalized slack
  std::size_t iterations = 0;
  std::size_t violations = 0;
};

void accumulate(CheckSummary& s, const framework::SolverTrace& t) {
  for (const auto& r : t.records) {
    const auto& c = r.checks;
    ++s.iterations;
    if (c.violated) ++s.violations;
    if (c.cc1) s.cc1 = std::max(s.cc1, *c.cc1 / *c.cc1_bound);
    if (c.lemma2) s.lemma2 = std::max(s.lemma2, *c.lemma2 / c.scale);
    if (c.cc3_slack) s.cc3 = std::min(s.cc3, *c.cc3_slack / c.scale);
    if (c.prediction_min_slack) s.pred = std::min(s.pred, *c.prediction_min_slack);
  }
}

// max violation of 0 in grad + lin + t x + mu d|x| over the recorded x2 updates
double ladmm_subgradient_worst(const framework::SolverTrace& t, const ExperimentSpec& spec) {
  const auto problem = bench::resolve_problem(spec.problem);
  const double r = *algorithms::resolved_r_prox(spec.method, problem);
  const auto& b1 = problem.block(0);
  const auto& b2 = problem.block(1);
  const double mu = b2.oracle.l1_weight();
  double worst = 0.0;
  for (const auto& rec : t.records) {
    const double beta = rec.beta_k;
    const double tt = *spec.method.tau * r * beta;
    const DenseVector& x2 = rec.state_before.x_blocks[1];
    const DenseVector& y = rec.prediction.x_tilde_blocks[1];
    const DenseVector lin =
        -linalg::matvec_t(b2.A, rec.state_before.lambda) +
        beta * linalg::matvec_t(b2.A, linalg::matvec(b1.A, rec.prediction.x_tilde_blocks[0]) +
                                          linalg::matvec(b2.A, x2) - problem.b()) -
        tt * x2;
    const DenseVector g = b2.oracle.smooth_gradient(y) + lin + tt * y;
    const double scale = 1.0 + linalg::norm_inf(lin);
    for (std::size_t j = 0; j < y.dim(); ++j) {
      const double d = y[j] > 0   ? std::abs(g[j] + mu)
                       : y[j] < 0 ? std::abs(g[j] - mu)
                                  : std::max(0.0, std::abs(g[j]) - mu);
      worst = std::max(worst, d / scale);
    }
  }
  return worst;
}

void guarded(int id, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, std::string("error: ") + e.what());
  }
}

}  // namespace

int main() {
  CheckSummary summary;
  bool summary_complete = true;
  const auto p1 = instance(problems::Template::P1Qp, {50}, 20);

  // 1 and 6 share the GPALM run
  std::optional<bench::RateFit> c1_fit;
  const ExperimentSpec c1 = base(p1, gpalm_indefinite(), maximal(schedules::Condition::V25));
  guarded(1, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto trace = bench::run_experiment(c1);
    const double secs = seconds_since(t0);
    accumulate(summary, trace);
    const auto fit = bench::fit_rate(trace, Metric::ErgodicGap, kWindow);
    c1_fit = fit;
    report(1, fit.slope <= -1.8 && fit.r_squared >= 0.95 && secs <= 60.0,
           "gpalm maximal-v25 ergodic-gap " + fit_str(fit) + " runtime=" + fmt("%.1fs", secs) +
               " (need slope<=-1.8, r2>=0.95, <=60s)");
    guarded(6, [&] {
      const auto f6 = bench::fit_rate(trace, Metric::MinIterateDiff, kWindow);
      report(6, f6.slope <= -2.5, "gpalm min-iterate-diff " + fit_str(f6) + " (need slope<=-2.5)");
    });
  });

  guarded(2, [&] {
    algorithms::MethodConfig m;
    m.method = algorithms::MethodKind::Gpalm;
    m.proximal_kind = algorithms::ProximalKind::Definite;  // D0 = 0
    ExperimentSpec c2 = base(p1, m, constant(1.0));
    const auto trace = bench::run_experiment(c2);
    accumulate(summary, trace);
    const auto fit = bench::fit_rate(trace, Metric::ErgodicGap, kWindow);
    const auto feas = bench::fit_rate(trace, Metric::ErgodicFeasibility, kWindow);
    ExperimentSpec a = c2, b = c1;
    a.checks.clear();
    b.checks.clear();
    const auto rep = bench::compare_schedules({a, b}, Metric::ErgodicGap, kWindow, {"constant", "maximal-v25"});
    const double margin = rep.entries[1].margin;
    const bool in_band = fit.slope >= -1.3 && fit.slope <= -0.7;
    report(2, in_band && margin >= 0.5,
           "gpalm constant beta=1 ergodic-gap " + fit_str(fit) + " (need slope in [-1.3,-0.7]); margin vs criterion 1 = " +
               fmt("%.3f", margin) + " (need >=0.5); info: ergodic-feasibility slope=" + fmt("%.3f", feas.slope));
  });

  guarded(3, [&] {
    const ExperimentSpec c3 = base(instance(problems::Template::P2StronglyConvex, {25, 25}, 20), admm(1.6),
                                   maximal(schedules::Condition::C14));
    const auto trace = bench::run_experiment(c3);
    accumulate(summary, trace);
    const auto gap = bench::fit_rate(trace, Metric::ErgodicGap, kWindow);
    const auto feas = bench::fit_rate(trace, Metric::ErgodicFeasibility, kWindow);
    report(3, gap.slope <= -1.8 && feas.slope <= -1.8,
           "admm gamma=1.6 maximal-c14 ergodic-gap " + fit_str(gap) + ", ergodic-feasibility slope=" +
               fmt("%.3f", feas.slope) + " (need both <=-1.8)");
  });

  guarded(4, [&] {
    const ExperimentSpec c4 = base(instance(problems::Template::P2LassoLike, {25, 25}, 20), ladmm(),
                                   maximal(schedules::Condition::A16));
    const auto trace = bench::run_experiment(c4);
    accumulate(summary, trace);
    const auto gap = bench::fit_rate(trace, Metric::ErgodicGap, kWindow);
    const double sub = ladmm_subgradient_worst(trace, c4);
    report(4, gap.slope <= -1.8 && sub <= 1e-9,
           "ladmm tau=0.75 maximal-a16 ergodic-gap " + fit_str(gap) + ", worst x2 subgradient residual=" +
               fmt("%.2e", sub) + " (need slope<=-1.8, residual<=1e-9)");
  });

  guarded(5, [&] {
    const ExperimentSpec c5 = base(instance(problems::Template::P3Multiblock, {10, 10, 40}, 20, 10.0), multiblock(),
                                   maximal(schedules::Condition::D10));
    const auto trace = bench::run_experiment(c5);
    accumulate(summary, trace);
    const auto gap = bench::fit_rate(trace, Metric::ErgodicGap, kWindow);
    std::size_t psd = 0;
    for (const auto& r : trace.records) psd += (r.checks.g_psd && *r.checks.g_psd) ? 1 : 0;
    report(5, gap.slope <= -1.8 && psd == trace.records.size(),
           "multiblock m=3 maximal-d10 r=1/beta ergodic-gap " + fit_str(gap) + ", G PSD on " + std::to_string(psd) +
               "/" + std::to_string(trace.records.size()) + " iterations (need slope<=-1.8, all PSD)");
  });

  if (summary.iterations != 5 * kK) summary_complete = false;
  report(7, summary_complete && summary.violations == 0 && summary.cc1 <= 1.0 && summary.lemma2 <= 1e-9 &&
                summary.cc3 >= -1e-8 && summary.pred >= -1e-8,
         std::to_string(summary.iterations) + " checked iterations over criteria 1-5, " +
             std::to_string(summary.violations) + " with violations; worst cc1/bound=" + fmt("%.2e", summary.cc1) +
             " lemma2/scale=" + fmt("%.2e", summary.lemma2) + " cc3 slack/scale=" + fmt("%.2e", summary.cc3) +
             " prediction slack/scale=" + fmt("%.2e", summary.pred));

  guarded(8, [&] {
    const auto problem = problems::generate_instance(instance(problems::Template::P2StronglyConvex, {10, 25}, 20, 20.0, 8));
    const auto mb = algorithms::make_method(multiblock(), problem);
    const auto ad = algorithms::make_method(admm(1.0), problem);
    auto a = ad->initial_state();
    auto b = mb->initial_state();
    const auto sched = schedules::PenaltySchedule::linear(0.05, 1.0);
    double worst = 0.0;
    for (std::size_t k = 0; k < 200; ++k) {
      const double beta = sched.beta_at(k);
      a = algorithms::admm_step(problem, a, beta, admm(1.0)).next;
      b = algorithms::multiblock_step(problem, b, beta, multiblock()).next;
      for (std::size_t i = 0; i < 2; ++i) worst = std::max(worst, linalg::norm_inf(a.x_blocks[i] - b.x_blocks[i]));
      worst = std::max(worst, linalg::norm_inf(a.lambda - b.lambda));
    }
    report(8, worst <= 1e-10, "multiblock(m=2) vs admm(gamma=1), 200 iterations, max deviation=" + fmt("%.2e", worst) +
                                  " (need <=1e-10)");
  });

  guarded(9, [&] {
    struct Item {
      const char* name;
      algorithms::MethodConfig cfg;
      problems::InstanceSpec inst;
    };
    const std::vector<Item> items = {
        {"gpalm", gpalm_indefinite(), instance(problems::Template::P1Qp, {20}, 10)},
        {"admm", admm(1.6), instance(problems::Template::P2StronglyConvex, {10, 10}, 8)},
        {"ladmm", ladmm(), instance(problems::Template::P2LassoLike, {10, 10}, 8)},
        {"multiblock", multiblock(), instance(problems::Template::P3Multiblock, {5, 5, 10}, 8, 10.0)},
        {"padmm", padmm(), instance(problems::Template::P2LinearQuadratic, {5, 10}, 8)}};
    double worst = 0.0;
    std::string detail;
    for (const auto& it : items) {
      const auto problem = problems::generate_instance(it.inst);
      const auto method = algorithms::make_method(it.cfg, problem);
      const auto sp = problems::kkt_oracle(problem);
      auto s = method->make_state(sp.x_star, sp.lambda_star);
      const double vn = linalg::norm(s.v);
      double w = 0.0;
      for (int k = 0; k < 10; ++k) {
        auto next = method->step(s, 1.0 + k).next;
        w = std::max(w, linalg::norm(next.v - s.v) / (1.0 + vn));
        s = std::move(next);
      }
      worst = std::max(worst, w);
      detail += std::string(" ") + it.name + "=" + fmt("%.1e", w);
    }
    report(9, worst <= 1e-10, "fixed point, 10 steps from the saddle, max ||dv||/(1+||v*||):" + detail + " (need <=1e-10)");
  });

  guarded(10, [&] {
    struct Item {
      const char* name;
      algorithms::MethodConfig cfg;
      problems::InstanceSpec inst;
      ScheduleSpec sched;
    };
    const std::vector<Item> items = {
        {"gpalm", gpalm_indefinite(), instance(problems::Template::P1Qp, {20}, 10), maximal(schedules::Condition::V25)},
        {"admm", admm(1.6), instance(problems::Template::P2StronglyConvex, {10, 10}, 8),
         maximal(schedules::Condition::C14)},
        {"ladmm", ladmm(), instance(problems::Template::P2LassoLike, {10, 10}, 8), maximal(schedules::Condition::A16)},
        {"multiblock", multiblock(), instance(problems::Template::P3Multiblock, {5, 5, 10}, 8, 10.0),
         maximal(schedules::Condition::D10)},
        {"padmm", padmm(), instance(problems::Template::P2LinearQuadratic, {5, 10}, 8), constant(1.0)}};
    bool all = true;
    std::string detail;
    for (const auto& it : items) {
      const auto problem = problems::generate_instance(it.inst);
      const auto method = algorithms::make_method(it.cfg, problem);
      const auto sched = bench::resolve_schedule(it.sched, *method);
      const auto sp = problems::kkt_oracle(problem);
      const DenseVector xs = linalg::concat(sp.x_star);
      auto s = method->initial_state();
      std::size_t reached = 0;
      double err = 0.0;
      for (std::size_t k = 0; k < 10000; ++k) {
        s = method->step(s, sched.beta_at(k)).next;
        err = linalg::norm(linalg::concat(s.x_blocks) - xs);
        if (err <= 1e-4) {
          reached = k + 1;
          break;
        }
      }
      all = all && reached > 0;
      detail += std::string(" ") + it.name + "=" + (reached ? "K" + std::to_string(reached) : "not reached (" + fmt("%.1e", err) + ")");
    }
    report(10, all, "||x^K - x*|| <= 1e-4 within K <= 10000:" + detail);
  });

  for (const auto& [id, line] : lines) std::printf("criterion %d: %s\n", id, line.c_str());
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
