#include <charconv>
#include <sstream>

#include "pcrate/error.hpp"
#include "pcrate/framework.hpp"

namespace pcrate::framework {
namespace {

constexpr const char* kColumns[] = {"k",           "beta_k",          "r_k",
                                    "lagrangian_gap_ergodic",          "feasibility_ergodic",
                                    "gap_pointwise", "iterate_diff_sq", "cc1_residual",
                                    "cc3_slack",   "theta_k"};
constexpr std::size_t kNumColumns = std::size(kColumns);

std::string opt(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

std::optional<double> parse_field(const std::string& s, std::size_t line, const char* col) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw SpecError("trace CSV line " + std::to_string(line) + ": bad value '" + s + "' in column " + col);
  }
  return v;
}

nlohmann::json opt_json(const std::optional<double>& x) {
  return x ? nlohmann::json(*x) : nlohmann::json(nullptr);
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

std::vector<TraceRow> trace_rows(const SolverTrace& trace) {
  std::vector<TraceRow> rows;
  rows.reserve(trace.records.size());
  for (const auto& rec : trace.records) {
    TraceRow r;
    r.k = rec.k;
    r.beta_k = rec.beta_k;
    r.r_k = rec.r_k;
    r.lagrangian_gap_ergodic = rec.lagrangian_gap_ergodic;
    r.feasibility_ergodic = rec.feasibility_ergodic;
    r.gap_pointwise = rec.gap_at_saddle;
    r.iterate_diff_sq = rec.iterate_diff_sq;
    if (rec.cert) {
      r.cc1_residual = rec.cert->cc1_residual;
      r.theta_k = rec.cert->theta_k;
    }
    r.cc3_slack = rec.checks.cc3_slack;
    rows.push_back(r);
  }
  return rows;
}

std::string trace_to_csv(const SolverTrace& trace) {
  std::ostringstream out;
  for (std::size_t c = 0; c < kNumColumns; ++c) out << (c ? "," : "") << kColumns[c];
  out << '\n';
  for (const auto& r : trace_rows(trace)) {
    out << r.k << ',' << format_double(r.beta_k) << ',' << format_double(r.r_k) << ','
        << format_double(r.lagrangian_gap_ergodic) << ',' << format_double(r.feasibility_ergodic) << ','
        << format_double(r.gap_pointwise) << ',' << format_double(r.iterate_diff_sq) << ','
        << opt(r.cc1_residual) << ',' << opt(r.cc3_slack) << ',' << opt(r.theta_k) << '\n';
  }
  return out.str();
}

nlohmann::json trace_to_json(const SolverTrace& trace) {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& rec : trace.records) {
    nlohmann::json j;
    j["k"] = rec.k;
    j["beta_k"] = rec.beta_k;
    j["r_k"] = rec.r_k;
    j["lagrangian_gap_ergodic"] = rec.lagrangian_gap_ergodic;
    j["feasibility_ergodic"] = rec.feasibility_ergodic;
    j["gap_pointwise"] = rec.gap_at_saddle;
    j["feasibility"] = rec.feasibility;
    j["iterate_diff_sq"] = rec.iterate_diff_sq;
    j["min_iterate_diff_sq"] = rec.min_iterate_diff_sq;
    if (rec.cert) {
      j["cc1_residual"] = rec.cert->cc1_residual;
      j["theta_k"] = rec.cert->theta_k;
      j["theta_next"] = rec.cert->theta_next;
      j["sigma_used"] = rec.cert->sigma_used;
    }
    const auto& c = rec.checks;
    j["checks"] = {{"cc1", opt_json(c.cc1)},
                   {"cc2", opt_json(c.cc2)},
                   {"lemma2", opt_json(c.lemma2)},
                   {"cc3_slack", opt_json(c.cc3_slack)},
                   {"prediction_min_slack", opt_json(c.prediction_min_slack)},
                   {"g_psd", c.g_psd ? nlohmann::json(*c.g_psd) : nlohmann::json(nullptr)},
                   {"scale", c.scale},
                   {"violations", c.violations}};
    j["x_tilde"] = nlohmann::json::array();
    for (const auto& x : rec.prediction.x_tilde_blocks) j["x_tilde"].push_back(x.values());
    j["lambda_next"] = rec.state_after.lambda.values();
    recs.push_back(std::move(j));
  }
  return {{"iterations", trace.iterations},
          {"ergodic_weight_sum", trace.ergodic_weight_sum},
          {"ergodic_x", trace.ergodic_x.values()},
          {"any_violation", trace.any_violation},
          {"records", recs}};
}

std::vector<TraceRow> parse_trace_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw SpecError("trace CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    std::istringstream hs(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(hs, cell, ',')) {
      if (c >= kNumColumns || cell != kColumns[c]) throw SpecError("trace CSV header mismatch at '" + cell + "'");
      ++c;
    }
    if (c != kNumColumns) throw SpecError("trace CSV header has " + std::to_string(c) + " columns");
  }
  std::vector<TraceRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t pos = line.find(',', start);
      cells.push_back(line.substr(start, pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    if (cells.size() != kNumColumns) {
      throw SpecError("trace CSV line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                      " fields");
    }
    auto req = [&](std::size_t c) {
      auto v = parse_field(cells[c], lineno, kColumns[c]);
      if (!v) throw SpecError("trace CSV line " + std::to_string(lineno) + ": missing " + kColumns[c]);
      return *v;
    };
    TraceRow r;
    r.k = static_cast<std::size_t>(req(0));
    r.beta_k = req(1);
    r.r_k = req(2);
    r.lagrangian_gap_ergodic = req(3);
    r.feasibility_ergodic = req(4);
    r.gap_pointwise = req(5);
    r.iterate_diff_sq = req(6);
    r.cc1_residual = parse_field(cells[7], lineno, kColumns[7]);
    r.cc3_slack = parse_field(cells[8], lineno, kColumns[8]);
    r.theta_k = parse_field(cells[9], lineno, kColumns[9]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace pcrate::framework
