#include "pcrate/bench.hpp"
#include "pcrate/error.hpp"
#include "pcrate/problems_io.hpp"

namespace pcrate::bench {
namespace {

using nlohmann::json;

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

template <class T>
std::optional<T> get_opt(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get_or<T>(j, key, T{});
}

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string identity_scale_name(algorithms::IdentityScale s) {
  return s == algorithms::IdentityScale::Beta ? "beta" : "inverse-beta";
}

problems::InstanceSpec instance_from_json(const json& j) {
  problems::InstanceSpec s;
  s.templ = problems::parse_template(get_or<std::string>(j, "template", "p1-qp"));
  s.n_blocks = get_or<std::vector<std::size_t>>(j, "n", {});
  s.l = get_or<std::size_t>(j, "l", 0);
  s.sigma = get_or<double>(j, "sigma", 1.0);
  s.lipschitz = get_opt<double>(j, "L");
  s.mu = get_or<double>(j, "mu", 0.5);
  s.seed = get_or<std::uint64_t>(j, "seed", 0);
  return s;
}

json instance_to_json(const problems::InstanceSpec& s) {
  json j = {{"template", problems::template_name(s.templ)},
            {"n", s.n_blocks},
            {"l", s.l},
            {"sigma", s.sigma},
            {"mu", s.mu},
            {"seed", s.seed}};
  j["L"] = s.lipschitz ? json(*s.lipschitz) : json(nullptr);
  return j;
}

ScheduleSpec schedule_from_json(const json& j) {
  ScheduleSpec s;
  const std::string kind = get_or<std::string>(j, "kind", "maximal");
  if (kind == "constant") {
    s.kind = ScheduleSpec::Kind::Constant;
  } else if (kind == "linear") {
    s.kind = ScheduleSpec::Kind::Linear;
  } else if (kind == "maximal") {
    s.kind = ScheduleSpec::Kind::Maximal;
  } else {
    throw ScheduleError("unknown schedule kind '" + kind + "'");
  }
  s.beta = get_or<double>(j, "beta", 1.0);
  s.delta = get_or<double>(j, "delta", 1.0);
  s.offset = get_or<double>(j, "offset", 1.0);
  s.beta0 = get_or<double>(j, "beta0", 1.0);
  s.condition = schedules::parse_condition(get_or<std::string>(j, "condition", "v25"));
  if (auto w = get_opt<std::string>(j, "weight")) s.weight_rule = schedules::parse_weight_rule(*w);
  return s;
}

json schedule_to_json(const ScheduleSpec& s) {
  json j = {{"kind", schedule_kind_name(s.kind)}};
  switch (s.kind) {
    case ScheduleSpec::Kind::Constant:
      j["beta"] = s.beta;
      break;
    case ScheduleSpec::Kind::Linear:
      j["delta"] = s.delta;
      j["offset"] = s.offset;
      break;
    case ScheduleSpec::Kind::Maximal:
      j["beta0"] = s.beta0;
      j["condition"] = schedules::condition_name(s.condition);
      break;
  }
  if (s.weight_rule) j["weight"] = schedules::weight_rule_name(*s.weight_rule);
  return j;
}

}  // namespace

MethodConfig method_from_json(const json& j) {
  MethodConfig m;
  require(j, "name");
  m.method = algorithms::parse_method(get_or<std::string>(j, "name", ""));
  m.gamma = get_or<double>(j, "gamma", 1.0);
  m.tau = get_opt<double>(j, "tau");
  m.r_prox = get_opt<double>(j, "r_prox");
  m.r_prox_factor = get_opt<double>(j, "r_prox_factor");
  const char* default_kind = m.method == algorithms::MethodKind::Padmm ? "identity-scaled" : "definite";
  m.proximal_kind = algorithms::parse_proximal_kind(get_or<std::string>(j, "proximal", default_kind));
  if (j.contains("D0") && !j.at("D0").is_null()) {
    try {
      m.D0 = problems::matrix_from_json(j.at("D0"), "D0");
    } catch (const SpecError& e) {
      throw ConfigError(e.what());
    }
  }
  const std::string scale = get_or<std::string>(j, "identity_scale", "beta");
  if (scale == "beta") {
    m.identity_scale = algorithms::IdentityScale::Beta;
  } else if (scale == "inverse-beta") {
    m.identity_scale = algorithms::IdentityScale::InverseBeta;
  } else {
    throw ConfigError("identity_scale must be beta or inverse-beta");
  }
  return m;
}

json method_to_json(const MethodConfig& m) {
  json j = {{"name", algorithms::method_name(m.method)},
            {"gamma", m.gamma},
            {"proximal", algorithms::proximal_kind_name(m.proximal_kind)},
            {"identity_scale", identity_scale_name(m.identity_scale)}};
  if (m.tau) j["tau"] = *m.tau;
  if (m.r_prox) j["r_prox"] = *m.r_prox;
  if (m.r_prox_factor) j["r_prox_factor"] = *m.r_prox_factor;
  if (m.D0) j["D0"] = problems::to_json(*m.D0);
  return j;
}

ExperimentSpec spec_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  ExperimentSpec s;
  const json& p = require(j, "problem");
  if (p.is_object() && p.contains("path")) {
    std::filesystem::path path = get_or<std::string>(p, "path", "");
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    s.problem = path;
  } else if (p.is_object() && p.contains("blocks")) {
    s.problem = std::make_shared<const BlockProblem>(problems::problem_from_json(p));
  } else {
    s.problem = instance_from_json(p);
  }
  s.method = method_from_json(require(j, "method"));
  s.schedule = schedule_from_json(j.value("schedule", json::object()));
  s.iterations = get_or<std::size_t>(j, "iterations", 100);
  s.record_every = get_or<std::size_t>(j, "record_every", 1);
  for (const auto& c : get_or<std::vector<std::string>>(j, "checks", {})) s.checks.insert(parse_check(c));
  s.competitors = get_or<std::size_t>(j, "competitors", 50);
  s.seed = get_or<std::uint64_t>(j, "seed", 0);
  validate_spec(s);
  return s;
}

json spec_to_json(const ExperimentSpec& s) {
  json j;
  if (const auto* inst = std::get_if<problems::InstanceSpec>(&s.problem)) {
    j["problem"] = instance_to_json(*inst);
  } else if (const auto* path = std::get_if<std::filesystem::path>(&s.problem)) {
    j["problem"] = {{"path", path->string()}};
  } else {
    j["problem"] = problems::problem_to_json(*std::get<std::shared_ptr<const BlockProblem>>(s.problem));
  }
  j["method"] = method_to_json(s.method);
  j["schedule"] = schedule_to_json(s.schedule);
  j["iterations"] = s.iterations;
  j["record_every"] = s.record_every;
  j["checks"] = json::array();
  for (Check c : s.checks) j["checks"].push_back(check_name(c));
  j["competitors"] = s.competitors;
  j["seed"] = s.seed;
  return j;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
  json j;
  try {
    j = problems::read_json_file(path);
  } catch (const SpecError& e) {
    throw ConfigError(e.what());
  }
  return spec_from_json(j, path.parent_path());
}

}  // namespace pcrate::bench
