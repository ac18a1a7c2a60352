#include "internal.hpp"
#include "pcrate/error.hpp"

namespace pcrate::algorithms {

std::unique_ptr<Method> make_method(const MethodConfig& cfg, const BlockProblem& problem) {
  switch (cfg.method) {
    case MethodKind::Gpalm:
      return detail::make_gpalm(cfg, problem);
    case MethodKind::Admm:
      return detail::make_admm(cfg, problem);
    case MethodKind::Ladmm:
      return detail::make_ladmm(cfg, problem);
    case MethodKind::Multiblock:
      return detail::make_multiblock(cfg, problem);
    case MethodKind::Padmm:
      return detail::make_padmm(cfg, problem);
  }
  throw ConfigError("unknown method");
}

namespace {

StepResult one_step(MethodKind kind, const BlockProblem& problem, const IterateState& state, double beta,
                    MethodConfig cfg) {
  if (cfg.method != kind) {
    throw ConfigError("config names method '" + method_name(cfg.method) + "' but " + method_name(kind) +
                      "_step was called");
  }
  if (!(beta > 0.0)) throw ConfigError("beta must be positive");
  return make_method(cfg, problem)->step(state, beta);
}

}  // namespace

StepResult gpalm_step(const BlockProblem& p, const IterateState& s, double beta, const MethodConfig& cfg) {
  return one_step(MethodKind::Gpalm, p, s, beta, cfg);
}
StepResult admm_step(const BlockProblem& p, const IterateState& s, double beta, const MethodConfig& cfg) {
  return one_step(MethodKind::Admm, p, s, beta, cfg);
}
StepResult ladmm_step(const BlockProblem& p, const IterateState& s, double beta, const MethodConfig& cfg) {
  return one_step(MethodKind::Ladmm, p, s, beta, cfg);
}
StepResult multiblock_step(const BlockProblem& p, const IterateState& s, double beta, const MethodConfig& cfg) {
  return one_step(MethodKind::Multiblock, p, s, beta, cfg);
}
StepResult padmm_step(const BlockProblem& p, const IterateState& s, double beta, const MethodConfig& cfg) {
  return one_step(MethodKind::Padmm, p, s, beta, cfg);
}

}  // namespace pcrate::algorithms
