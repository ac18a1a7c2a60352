#include <fstream>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pcrate/bench.hpp"
#include "pcrate/error.hpp"
#include "pcrate/problems_io.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfig = 2;
constexpr int kViolation = 3;
constexpr int kNumerical = 4;

using namespace pcrate;

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void print_violations(const framework::SolverTrace& trace) {
  std::size_t shown = 0;
  for (const auto& r : trace.records) {
    if (!r.checks.violated) continue;
    if (shown++ < 20) {
      std::cerr << "violation at k=" << r.k << ":";
      for (const auto& v : r.checks.violations) std::cerr << ' ' << v;
      std::cerr << '\n';
    }
  }
  if (shown > 20) std::cerr << "... " << shown - 20 << " more\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prediction-correction solvers and convergence-rate experiments"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "generate a synthetic instance");
  std::string templ = "p1-qp", out_path;
  std::uint64_t seed = 0;
  std::vector<std::size_t> dims;
  std::size_t rows = 0;
  double sigma = 1.0, mu = 0.5;
  std::optional<double> lipschitz;
  gen->add_option("--template", templ, "p1-qp | p2-strongly-convex | p2-lasso-like | p3-multiblock | p2-linear-quadratic")
      ->required();
  gen->add_option("--seed", seed);
  gen->add_option("--out", out_path)->required();
  gen->add_option("--n", dims, "block dimensions")->delimiter(',');
  gen->add_option("--l", rows, "constraint rows");
  gen->add_option("--sigma", sigma);
  gen->add_option("--L", lipschitz, "gradient Lipschitz constant of the last block");
  gen->add_option("--mu", mu, "l1 weight (p2-lasso-like)");

  auto* run = app.add_subcommand("run", "run an experiment");
  std::string config, trace_csv, trace_json;
  run->add_option("--config", config)->required();
  run->add_option("--trace", trace_csv, "trace CSV output")->required();
  run->add_option("--trace-json", trace_json, "full-precision JSON trace");

  auto* check = app.add_subcommand("check", "evaluate the convergence conditions only");
  check->add_option("--config", config)->required();

  auto* rates = app.add_subcommand("rates", "fit a log-log rate to a trace");
  std::string metric = "ergodic-gap", window = "50:2000";
  rates->add_option("--trace", trace_csv)->required();
  rates->add_option("--metric", metric);
  rates->add_option("--window", window, "lo:hi");

  auto* cmp = app.add_subcommand("compare", "compare schedules on one problem and method");
  std::vector<std::string> configs;
  std::string report_path;
  unsigned threads = 0;
  cmp->add_option("--configs", configs)->required()->expected(2, -1);
  cmp->add_option("--metric", metric);
  cmp->add_option("--window", window, "lo:hi");
  cmp->add_option("--out", report_path, "JSON report path");
  cmp->add_option("--threads", threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*gen) {
      problems::InstanceSpec spec;
      spec.templ = problems::parse_template(templ);
      spec.seed = seed;
      spec.n_blocks = dims;
      spec.l = rows;
      spec.sigma = sigma;
      spec.mu = mu;
      spec.lipschitz = lipschitz;
      problems::save_problem(problems::generate_instance(spec), out_path);
      std::cout << "wrote " << out_path << '\n';
      return kOk;
    }
    if (*run) {
      const auto spec = bench::load_spec(config);
      const auto trace = bench::run_experiment(spec);
      problems::write_text_file(trace_csv, framework::trace_to_csv(trace));
      if (!trace_json.empty()) problems::write_text_file(trace_json, framework::trace_to_json(trace).dump(1));
      std::cout << "iterations " << trace.iterations << ", records " << trace.records.size() << '\n';
      if (trace.any_violation) {
        print_violations(trace);
        return kViolation;
      }
      return kOk;
    }
    if (*check) {
      auto spec = bench::load_spec(config);
      if (spec.checks.empty()) {
        spec.checks = {bench::Check::Cc1, bench::Check::Cc2, bench::Check::Lemma2, bench::Check::Cc3,
                       bench::Check::PredictionInequality, bench::Check::GPsd};
      }
      bool bad = false;
      if (spec.schedule.kind == bench::ScheduleSpec::Kind::Maximal) {
        const auto problem = bench::resolve_problem(spec.problem);
        const auto method = algorithms::make_method(spec.method, problem);
        const auto schedule = bench::resolve_schedule(spec.schedule, *method);
        const auto viol = schedules::validate_schedule(schedule, spec.schedule.condition,
                                                       method->condition_params(), spec.iterations);
        for (const auto& v : viol) {
          std::cerr << "schedule clause '" << v.clause << "' fails at k=" << v.k << ": " << v.lhs << " < "
                    << v.rhs << '\n';
        }
        bad = !viol.empty();
      }
      const auto trace = bench::run_experiment(spec);
      std::size_t checked = 0;
      for (const auto& r : trace.records) checked += r.checks.violated ? 0 : 1;
      std::cout << "checked " << trace.records.size() << " iterations, " << trace.records.size() - checked
                << " with violations\n";
      if (trace.any_violation) print_violations(trace);
      return bad || trace.any_violation ? kViolation : kOk;
    }
    if (*rates) {
      const auto rows_parsed = framework::parse_trace_csv(read_text(trace_csv));
      const auto fit = bench::fit_rate(rows_parsed, bench::parse_metric(metric), bench::parse_window(window));
      std::cout << "slope " << framework::format_double(fit.slope) << "\nr2 "
                << framework::format_double(fit.r_squared) << "\npoints " << fit.points << '\n';
      return kOk;
    }
    if (*cmp) {
      std::vector<bench::ExperimentSpec> specs;
      for (const auto& c : configs) specs.push_back(bench::load_spec(c));
      const auto rep = bench::compare_schedules(specs, bench::parse_metric(metric), bench::parse_window(window),
                                                configs, threads);
      std::cout << bench::report_to_csv(rep);
      std::cout << "accelerated_beat_baseline " << (rep.accelerated_beat_baseline ? "yes" : "no")
                << "\nmonotone " << (rep.monotone ? "yes" : "no") << '\n';
      if (!report_path.empty()) {
        const bool csv = std::filesystem::path(report_path).extension() == ".csv";
        problems::write_text_file(report_path, csv ? bench::report_to_csv(rep) : bench::report_to_json(rep).dump(2));
      }
      return kOk;
    }
  } catch (const pcrate::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.category() == pcrate::Error::Category::Config ? kConfig : kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kConfig;
}
