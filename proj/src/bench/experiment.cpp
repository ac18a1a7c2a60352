#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "pcrate/bench.hpp"
#include "pcrate/error.hpp"
#include "pcrate/linalg/solve.hpp"
#include "pcrate/problems_io.hpp"

namespace pcrate::bench {
namespace {

using framework::CheckOutcome;
using framework::IterateState;
using framework::TraceRecord;
using linalg::DenseVector;

template <class... Ts>
struct Overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overload(Ts...) -> Overload<Ts...>;

void require_finite(const DenseVector& v, std::size_t k, const char* what) {
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (!std::isfinite(v[i])) {
      throw NonFiniteError(std::string(what) + " became non-finite at iteration " + std::to_string(k));
    }
  }
}

void check_compatibility(algorithms::MethodKind kind, const BlockProblem& p) {
  const std::size_t m = p.num_blocks();
  const bool ok = kind == algorithms::MethodKind::Gpalm        ? m == 1
                  : kind == algorithms::MethodKind::Multiblock ? m >= 2
                                                               : m == 2;
  if (!ok) {
    throw ConfigError("method " + algorithms::method_name(kind) + " is incompatible with a " +
                      std::to_string(m) + "-block problem");
  }
}

// Random competitors around the saddle, spread on the scale of the saddle
// and the current prediction.
class CompetitorSampler {
 public:
  CompetitorSampler(std::uint64_t seed, const algorithms::Method& method, const problems::SaddlePoint& saddle)
      : rng_(seed), method_(method), saddle_(saddle) {}

  framework::Competitor draw(const framework::Prediction& pred) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> mix(0.0, 1.0);
    framework::Competitor c;
    const double t = mix(rng_);
    for (std::size_t i = 0; i < saddle_.x_star.size(); ++i) {
      const DenseVector& xs = saddle_.x_star[i];
      const DenseVector& xt = pred.x_tilde_blocks[i];
      DenseVector x(xs.dim());
      const double spread = 1.0 + linalg::norm_inf(xs - xt);
      for (std::size_t j = 0; j < x.dim(); ++j) x[j] = t * xs[j] + (1.0 - t) * xt[j] + spread * u(rng_);
      c.x_blocks.push_back(std::move(x));
    }
    const double spread = 1.0 + linalg::norm_inf(saddle_.lambda_star - pred.lambda_tilde);
    c.lambda = DenseVector(saddle_.lambda_star.dim());
    for (std::size_t j = 0; j < c.lambda.dim(); ++j) {
      c.lambda[j] = t * saddle_.lambda_star[j] + (1.0 - t) * pred.lambda_tilde[j] + spread * u(rng_);
    }
    c.v = method_.v_map(c.x_blocks, c.lambda);
    c.z = method_.z_map(c.x_blocks);
    return c;
  }

 private:
  std::mt19937_64 rng_;
  const algorithms::Method& method_;
  const problems::SaddlePoint& saddle_;
};

void flag(CheckOutcome& out, bool bad, const std::string& what) {
  if (bad) {
    out.violated = true;
    out.violations.push_back(what);
  }
}

CheckOutcome run_checks(const ExperimentSpec& spec, const algorithms::Method& method, const BlockProblem& problem,
                        const algorithms::StepResult& res, const IterateState& before,
                        const framework::CertRecord& cert, const DenseVector& v_ref, CompetitorSampler& sampler) {
  CheckOutcome out;
  const auto& m = res.matrices;
  const DenseVector& vt = res.prediction.v_tilde;
  out.scale = framework::check_scale(m, before.v, vt, v_ref);
  const auto has = [&](Check c) { return spec.checks.count(c) > 0; };

  if (has(Check::Cc1)) {
    out.cc1 = cert.cc1_residual;
    out.cc1_bound = 1e-10 * (1.0 + linalg::frobenius_norm(m.Q));
    flag(out, *out.cc1 > *out.cc1_bound, "cc1");
  }
  if (has(Check::Cc2)) {
    out.cc2 = framework::check_cc2(m);
    out.cc2_bound = 1e-10 * (1.0 + linalg::frobenius_norm(m.G) + linalg::frobenius_norm(m.Q));
    flag(out, *out.cc2 > *out.cc2_bound, "cc2");
  }
  if (has(Check::Lemma2)) {
    out.lemma2 = framework::lemma2_identity_check(m, before.v, vt, v_ref);
    flag(out, *out.lemma2 > 1e-9 * out.scale, "lemma2");
  }
  if (has(Check::Cc3) && method.certifies_cc3()) {
    out.cc3_slack = cert.cc3_slack;
    flag(out, *out.cc3_slack < -1e-8 * out.scale, "cc3");
  }
  if (has(Check::PredictionInequality)) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < spec.competitors; ++i) {
      const auto pi = framework::prediction_inequality(problem, res.prediction, before.v, m, cert,
                                                       sampler.draw(res.prediction));
      worst = std::min(worst, pi.slack / pi.scale);
    }
    if (spec.competitors > 0) {
      out.prediction_min_slack = worst;
      flag(out, worst < -1e-8, "prediction-inequality");
    }
  }
  if (has(Check::GPsd) && method.g_psd_asserted()) {
    const double lo = linalg::extreme_eigenvalue(linalg::symmetrized(m.G), linalg::Which::Min);
    out.g_psd = lo >= -1e-9 * (1.0 + linalg::frobenius_norm(m.G));
    flag(out, !*out.g_psd, "g-psd");
  }
  return out;
}

double iterate_diff_sq(const IterateState& a, const IterateState& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.x_blocks.size(); ++i) s += linalg::norm_sq(a.x_blocks[i] - b.x_blocks[i]);
  return s;
}

}  // namespace

std::string schedule_kind_name(ScheduleSpec::Kind k) {
  switch (k) {
    case ScheduleSpec::Kind::Constant:
      return "constant";
    case ScheduleSpec::Kind::Linear:
      return "linear";
    case ScheduleSpec::Kind::Maximal:
      return "maximal";
  }
  return "unknown";
}

std::string check_name(Check c) {
  switch (c) {
    case Check::Cc1:
      return "cc1";
    case Check::Cc2:
      return "cc2";
    case Check::Lemma2:
      return "lemma2";
    case Check::Cc3:
      return "cc3";
    case Check::PredictionInequality:
      return "prediction-inequality";
    case Check::GPsd:
      return "g-psd";
  }
  return "unknown";
}

Check parse_check(const std::string& name) {
  for (Check c : {Check::Cc1, Check::Cc2, Check::Lemma2, Check::Cc3, Check::PredictionInequality, Check::GPsd}) {
    if (check_name(c) == name) return c;
  }
  throw ConfigError("unknown check '" + name + "'");
}

void validate_spec(const ExperimentSpec& spec) {
  if (spec.iterations < 10) throw ConfigError("iterations must be >= 10");
  if (spec.record_every < 1) throw ConfigError("record_every must be >= 1");
}

BlockProblem resolve_problem(const ProblemSource& source) {
  return std::visit(Overload{[](const problems::InstanceSpec& s) { return problems::generate_instance(s); },
                             [](const std::filesystem::path& p) { return problems::load_problem(p); },
                             [](const std::shared_ptr<const BlockProblem>& p) {
                               if (!p) throw ConfigError("empty in-memory problem");
                               return *p;
                             }},
                    source);
}

schedules::PenaltySchedule resolve_schedule(const ScheduleSpec& spec, const algorithms::Method& method) {
  const schedules::WeightRule rule = spec.weight_rule.value_or(method.natural_weight_rule());
  switch (spec.kind) {
    case ScheduleSpec::Kind::Constant:
      return schedules::PenaltySchedule(schedules::Constant{spec.beta}, rule);
    case ScheduleSpec::Kind::Linear:
      return schedules::PenaltySchedule(schedules::Linear{spec.delta, spec.offset}, rule);
    case ScheduleSpec::Kind::Maximal:
      return schedules::PenaltySchedule(schedules::Maximal{spec.beta0, spec.condition, method.condition_params()},
                                        rule);
  }
  throw ConfigError("unknown schedule kind");
}

SolverTrace run_experiment(const ExperimentSpec& spec) {
  validate_spec(spec);
  const BlockProblem problem = resolve_problem(spec.problem);
  check_compatibility(spec.method.method, problem);
  const auto method = algorithms::make_method(spec.method, problem);
  const auto schedule = resolve_schedule(spec.schedule, *method);
  const problems::SaddlePoint saddle = problems::kkt_oracle(problem);
  const DenseVector v_ref = method->v_map(saddle.x_star, saddle.lambda_star);
  CompetitorSampler sampler(spec.seed, *method, saddle);

  IterateState state = spec.start ? method->make_state(spec.start->first, spec.start->second)
                                  : method->initial_state();
  const std::vector<std::size_t> dims = problem.block_dims();

  SolverTrace trace;
  double min_diff = std::numeric_limits<double>::infinity();
  const std::size_t K = spec.iterations;
  for (std::size_t k = 0; k < K; ++k) {
    const double beta = schedule.beta_at(k);
    // beta^{-1} := beta^0
    const double beta_prev = k == 0 ? beta : schedule.beta_at(k - 1);
    const double beta_next = schedule.beta_at(k + 1);
    const double r_k = schedule.weight_at(k);

    state.k = k;
    algorithms::StepResult res = method->step(state, beta);
    require_finite(res.next.v, k, "iterate");
    require_finite(res.prediction.v_tilde, k, "prediction");

    framework::ergodic_update(trace, res.prediction.x_tilde_blocks, r_k);
    const double diff = iterate_diff_sq(state, res.next);
    min_diff = std::min(min_diff, diff);

    const bool record = k % spec.record_every == 0 || k + 1 == K;
    if (record) {
      TraceRecord rec;
      rec.k = k;
      rec.beta_k = beta;
      rec.r_k = r_k;
      const framework::CertRecord cert = method->certify(res, state, beta_prev, beta, beta_next, r_k, saddle);
      if (!spec.checks.empty()) {
        rec.checks = run_checks(spec, *method, problem, res, state, cert, v_ref, sampler);
        trace.any_violation = trace.any_violation || rec.checks.violated;
      }
      rec.cert = cert;
      const auto point = framework::gap_metrics(problem, res.prediction.x_tilde_blocks, saddle);
      rec.feasibility = point.feasibility;
      rec.gap_at_saddle = point.lagrangian_gap;
      rec.iterate_diff_sq = diff;
      const auto erg = framework::gap_metrics(problem, trace.ergodic.mean_blocks(dims), saddle);
      rec.lagrangian_gap_ergodic = erg.lagrangian_gap;
      rec.feasibility_ergodic = erg.feasibility;
      rec.min_iterate_diff_sq = min_diff;
      rec.state_before = state;
      rec.prediction = res.prediction;
      rec.state_after = res.next;
      trace.records.push_back(std::move(rec));
    }
    state = std::move(res.next);
  }
  trace.iterations = K;
  return trace;
}

}  // namespace pcrate::bench
