#include <algorithm>
#include <exception>
#include <sstream>
#include <thread>

#include "pcrate/bench.hpp"
#include "pcrate/error.hpp"
#include "pcrate/framework.hpp"

namespace pcrate::bench {

CompareReport compare_schedules(const std::vector<ExperimentSpec>& specs, Metric metric, Window window,
                                std::vector<std::string> labels, unsigned threads) {
  if (specs.size() < 2) throw ConfigError("compare needs at least two specs");
  if (!labels.empty() && labels.size() != specs.size()) throw ConfigError("one label per spec");
  const BlockProblem first = resolve_problem(specs[0].problem);
  for (std::size_t i = 1; i < specs.size(); ++i) {
    if (specs[i].method.method != specs[0].method.method) {
      throw ConfigError("compare: spec " + std::to_string(i) + " uses a different method");
    }
    if (!(resolve_problem(specs[i].problem) == first)) {
      throw ConfigError("compare: spec " + std::to_string(i) + " uses a different problem");
    }
  }

  const std::size_t n = specs.size();
  std::vector<SolverTrace> traces(n);
  std::vector<std::exception_ptr> errors(n);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t width = std::min<std::size_t>(n, threads == 0 ? hw : threads);
  // each worker owns disjoint trace slots
  for (std::size_t start = 0; start < n; start += width) {
    std::vector<std::jthread> pool;
    for (std::size_t i = start; i < std::min(n, start + width); ++i) {
      pool.emplace_back([&, i] {
        try {
          traces[i] = run_experiment(specs[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  CompareReport rep;
  rep.metric = metric;
  for (std::size_t i = 0; i < n; ++i) {
    if (specs[i].schedule.kind == ScheduleSpec::Kind::Constant) {
      rep.baseline = i;
      break;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    CompareEntry e;
    e.label = labels.empty() ? schedule_kind_name(specs[i].schedule.kind) + "#" + std::to_string(i) : labels[i];
    e.fit = fit_rate(traces[i], metric, window);
    e.any_violation = traces[i].any_violation;
    rep.entries.push_back(std::move(e));
  }
  const double base = rep.entries[rep.baseline].fit.slope;
  rep.accelerated_beat_baseline = true;
  rep.monotone = true;
  for (std::size_t i = 0; i < n; ++i) {
    rep.entries[i].margin = base - rep.entries[i].fit.slope;
    if (i != rep.baseline && rep.entries[i].margin < rep.min_margin) rep.accelerated_beat_baseline = false;
    if (i > 0 && rep.entries[i].fit.slope > rep.entries[i - 1].fit.slope) rep.monotone = false;
  }
  return rep;
}

nlohmann::json report_to_json(const CompareReport& report) {
  nlohmann::json j;
  j["metric"] = metric_name(report.metric);
  j["baseline"] = report.baseline;
  j["min_margin"] = report.min_margin;
  j["accelerated_beat_baseline"] = report.accelerated_beat_baseline;
  j["monotone"] = report.monotone;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : report.entries) {
    j["entries"].push_back({{"label", e.label},
                            {"window", {e.fit.window.lo, e.fit.window.hi}},
                            {"slope", e.fit.slope},
                            {"intercept", e.fit.intercept},
                            {"r_squared", e.fit.r_squared},
                            {"points", e.fit.points},
                            {"margin", e.margin},
                            {"any_violation", e.any_violation}});
  }
  return j;
}

std::string report_to_csv(const CompareReport& report) {
  using framework::format_double;
  std::ostringstream os;
  os << "label,k_lo,k_hi,slope,intercept,r_squared,points,margin,any_violation\n";
  for (const auto& e : report.entries) {
    os << e.label << ',' << format_double(e.fit.window.lo) << ',' << format_double(e.fit.window.hi) << ','
       << format_double(e.fit.slope) << ',' << format_double(e.fit.intercept) << ','
       << format_double(e.fit.r_squared) << ',' << e.fit.points << ',' << format_double(e.margin) << ','
       << (e.any_violation ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace pcrate::bench
