#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "pcrate/bench.hpp"
#include "pcrate/error.hpp"

namespace pcrate::bench {

std::string metric_name(Metric m) {
  switch (m) {
    case Metric::ErgodicGap:
      return "ergodic-gap";
    case Metric::ErgodicFeasibility:
      return "ergodic-feasibility";
    case Metric::MinIterateDiff:
      return "min-iterate-diff";
  }
  return "unknown";
}

Metric parse_metric(const std::string& name) {
  for (Metric m : {Metric::ErgodicGap, Metric::ErgodicFeasibility, Metric::MinIterateDiff}) {
    if (metric_name(m) == name) return m;
  }
  throw ConfigError("unknown metric '" + name + "'");
}

Window parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("window must look like lo:hi, got '" + text + "'");
  const auto num = [&](std::string_view s) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError("window bound '" + std::string(s) + "' is not a number");
    }
    return x;
  };
  const std::string_view sv(text);
  Window w{num(sv.substr(0, colon)), num(sv.substr(colon + 1))};
  if (!(w.lo > 0.0) || !(w.hi > w.lo)) throw ConfigError("window needs 0 < lo < hi");
  return w;
}

RateFit fit_power_law(const std::vector<double>& ks, const std::vector<double>& values, Window window,
                      double floor) {
  if (ks.size() != values.size()) throw ShapeError("fit_power_law: ks and values differ in length");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double k = ks[i];
    if (k < window.lo || k > window.hi || k < 1.0) continue;
    // stagnation at solver accuracy would flatten the slope
    if (!(values[i] > floor)) break;
    xs.push_back(std::log10(k));
    ys.push_back(std::log10(values[i]));
  }
  if (xs.size() < 5) {
    throw InsufficientDataError("rate fit needs at least 5 usable points, got " + std::to_string(xs.size()));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw InsufficientDataError("rate fit needs at least two distinct k");
  RateFit fit;
  fit.window = window;
  fit.points = xs.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    sse += e * e;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  return fit;
}

RateFit fit_rate(const SolverTrace& trace, Metric metric, Window window) {
  std::vector<double> ks, vs;
  for (const auto& r : trace.records) {
    ks.push_back(static_cast<double>(r.k));
    switch (metric) {
      case Metric::ErgodicGap:
        vs.push_back(r.lagrangian_gap_ergodic);
        break;
      case Metric::ErgodicFeasibility:
        vs.push_back(r.feasibility_ergodic);
        break;
      case Metric::MinIterateDiff:
        vs.push_back(r.min_iterate_diff_sq);
        break;
    }
  }
  return fit_power_law(ks, vs, window);
}

RateFit fit_rate(const std::vector<framework::TraceRow>& rows, Metric metric, Window window) {
  std::vector<double> ks, vs;
  double running = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    ks.push_back(static_cast<double>(r.k));
    switch (metric) {
      case Metric::ErgodicGap:
        vs.push_back(r.lagrangian_gap_ergodic);
        break;
      case Metric::ErgodicFeasibility:
        vs.push_back(r.feasibility_ergodic);
        break;
      case Metric::MinIterateDiff:
        running = std::min(running, r.iterate_diff_sq);
        vs.push_back(running);
        break;
    }
  }
  return fit_power_law(ks, vs, window);
}

}  // namespace pcrate::bench
