#pragma once

// Experiment runner, log-log rate fitting and schedule comparison.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pcrate/algorithms.hpp"
#include "pcrate/framework.hpp"
#include "pcrate/problems.hpp"
#include "pcrate/schedules.hpp"

namespace pcrate::bench {

using algorithms::MethodConfig;
using framework::SolverTrace;
using problems::BlockProblem;

/// Generated instance, serialized problem file, or an in-memory problem.
using ProblemSource =
    std::variant<problems::InstanceSpec, std::filesystem::path, std::shared_ptr<const BlockProblem>>;

/// Schedule block of an experiment. Maximal recurrences take their
/// parameters from the method and instance at run time.
struct ScheduleSpec {
  enum class Kind { Constant, Linear, Maximal };
  Kind kind = Kind::Maximal;
  double beta = 1.0;    // constant
  double delta = 1.0;   // linear
  double offset = 1.0;  // linear
  double beta0 = 1.0;   // maximal
  schedules::Condition condition = schedules::Condition::V25;
  /// Absent: the method's natural rule.
  std::optional<schedules::WeightRule> weight_rule;
};

std::string schedule_kind_name(ScheduleSpec::Kind k);

enum class Check { Cc1, Cc2, Lemma2, Cc3, PredictionInequality, GPsd };
std::string check_name(Check c);
/// Throws ConfigError on unknown names.
Check parse_check(const std::string& name);

struct ExperimentSpec {
  ProblemSource problem = problems::InstanceSpec{};
  MethodConfig method;
  ScheduleSpec schedule;
  std::size_t iterations = 100;   // K
  std::size_t record_every = 1;   // stride
  std::set<Check> checks;
  std::size_t competitors = 50;
  std::uint64_t seed = 0;
  /// Start from this state instead of zeros (x blocks and lambda).
  std::optional<std::pair<std::vector<linalg::DenseVector>, linalg::DenseVector>> start;
};

/// Throws ConfigError unless K >= 10 and stride >= 1.
void validate_spec(const ExperimentSpec& spec);

BlockProblem resolve_problem(const ProblemSource& source);
/// The concrete schedule the run will use with this method.
schedules::PenaltySchedule resolve_schedule(const ScheduleSpec& spec, const algorithms::Method& method);

/// Runs K iterations; records every stride-th iteration (and the last one).
/// Checks run on recorded iterations; violations are flagged in the trace,
/// the run continues.
SolverTrace run_experiment(const ExperimentSpec& spec);

enum class Metric { ErgodicGap, ErgodicFeasibility, MinIterateDiff };
std::string metric_name(Metric m);
Metric parse_metric(const std::string& name);

struct Window {
  double lo = 50.0;
  double hi = 2000.0;
};
/// "lo:hi"; ConfigError on malformed input.
Window parse_window(const std::string& text);

struct RateFit {
  Window window;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Values at or below this are numerical zero; the window ends before the
/// first such value.
inline constexpr double kRateFloor = 1e-10;

/// Least squares of log10(value) on log10(k) over k in [lo, hi], k >= 1.
/// Throws InsufficientDataError with fewer than 5 usable points.
RateFit fit_power_law(const std::vector<double>& ks, const std::vector<double>& values, Window window,
                      double floor = kRateFloor);
RateFit fit_rate(const SolverTrace& trace, Metric metric, Window window);
/// Same, from parsed CSV rows; min-iterate-diff is the running minimum over
/// the rows present.
RateFit fit_rate(const std::vector<framework::TraceRow>& rows, Metric metric, Window window);

struct CompareEntry {
  std::string label;
  RateFit fit;
  double margin = 0.0;  // baseline slope - this slope
  bool any_violation = false;
};

struct CompareReport {
  Metric metric = Metric::ErgodicGap;
  std::size_t baseline = 0;  // first constant schedule, else the first spec
  std::vector<CompareEntry> entries;
  /// Every non-baseline entry beats the baseline by at least min_margin.
  bool accelerated_beat_baseline = false;
  double min_margin = 0.5;
  /// Slopes non-increasing in spec order.
  bool monotone = false;
};

/// Runs the specs concurrently (one worker per spec, bounded by threads)
/// and fits each. ConfigError with fewer than two specs or when the
/// specs do not share problem and method.
CompareReport compare_schedules(const std::vector<ExperimentSpec>& specs, Metric metric, Window window,
                                std::vector<std::string> labels = {}, unsigned threads = 0);

nlohmann::json report_to_json(const CompareReport& report);
std::string report_to_csv(const CompareReport& report);

// Config documents.
/// Relative problem paths resolve against base_dir.
ExperimentSpec spec_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json spec_to_json(const ExperimentSpec& spec);
ExperimentSpec load_spec(const std::filesystem::path& path);
MethodConfig method_from_json(const nlohmann::json& j);
nlohmann::json method_to_json(const MethodConfig& m);

}  // namespace pcrate::bench
