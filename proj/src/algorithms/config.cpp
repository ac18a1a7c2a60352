#include <cmath>

#include "internal.hpp"
#include "pcrate/error.hpp"

namespace pcrate::algorithms {

std::string method_name(MethodKind m) {
  switch (m) {
    case MethodKind::Gpalm:
      return "gpalm";
    case MethodKind::Admm:
      return "admm";
    case MethodKind::Ladmm:
      return "ladmm";
    case MethodKind::Multiblock:
      return "multiblock";
    case MethodKind::Padmm:
      return "padmm";
  }
  return "unknown";
}

MethodKind parse_method(const std::string& name) {
  for (MethodKind m : {MethodKind::Gpalm, MethodKind::Admm, MethodKind::Ladmm, MethodKind::Multiblock,
                       MethodKind::Padmm}) {
    if (method_name(m) == name) return m;
  }
  throw ConfigError("unknown method '" + name + "'");
}

std::string proximal_kind_name(ProximalKind p) {
  switch (p) {
    case ProximalKind::Definite:
      return "definite";
    case ProximalKind::Indefinite:
      return "indefinite";
    case ProximalKind::IdentityScaled:
      return "identity-scaled";
  }
  return "unknown";
}

ProximalKind parse_proximal_kind(const std::string& name) {
  for (ProximalKind p : {ProximalKind::Definite, ProximalKind::Indefinite, ProximalKind::IdentityScaled}) {
    if (proximal_kind_name(p) == name) return p;
  }
  throw ConfigError("unknown proximal kind '" + name + "'");
}

double max_gamma(MethodKind m) {
  switch (m) {
    case MethodKind::Gpalm:
      return 2.0;
    case MethodKind::Admm:
      return (1.0 + std::sqrt(5.0)) / 2.0;
    case MethodKind::Ladmm:
    case MethodKind::Multiblock:
    case MethodKind::Padmm:
      return 1.0;
  }
  return 1.0;
}

std::optional<double> resolved_r_prox(const MethodConfig& cfg, const BlockProblem& problem) {
  if (cfg.r_prox && cfg.r_prox_factor) throw ConfigError("give either r_prox or r_prox_factor, not both");
  if (cfg.r_prox) return cfg.r_prox;
  if (!cfg.r_prox_factor) return std::nullopt;
  const std::size_t blk = cfg.method == MethodKind::Ladmm ? 1 : 0;
  if (blk >= problem.num_blocks()) throw ConfigError("r_prox_factor: problem has too few blocks");
  return *cfg.r_prox_factor * linalg::spectral_norm_sq(problem.block(blk).A);
}

namespace detail {

DenseMatrix zeros(std::size_t r, std::size_t c) { return DenseMatrix(r, c); }

DenseMatrix from_blocks(const std::vector<std::vector<DenseMatrix>>& grid) {
  const std::size_t nr = grid.size();
  const std::size_t nc = nr ? grid[0].size() : 0;
  std::vector<std::size_t> h(nr, 0), w(nc, 0);
  for (std::size_t i = 0; i < nr; ++i) {
    if (grid[i].size() != nc) throw ShapeError("from_blocks: ragged block grid");
    for (std::size_t j = 0; j < nc; ++j) {
      const auto& b = grid[i][j];
      if (b.empty()) continue;
      if ((h[i] && h[i] != b.rows()) || (w[j] && w[j] != b.cols())) {
        throw ShapeError("from_blocks: block (" + std::to_string(i) + "," + std::to_string(j) + ") is " +
                         b.shape_string());
      }
      h[i] = b.rows();
      w[j] = b.cols();
    }
  }
  std::size_t rows = 0, cols = 0;
  for (auto x : h) rows += x;
  for (auto x : w) cols += x;
  DenseMatrix out(rows, cols);
  std::size_t r0 = 0;
  for (std::size_t i = 0; i < nr; ++i) {
    std::size_t c0 = 0;
    for (std::size_t j = 0; j < nc; ++j) {
      if (!grid[i][j].empty()) out.set_block(r0, c0, grid[i][j]);
      c0 += w[j];
    }
    r0 += h[i];
  }
  return out;
}

void require_r_above(double r, double norm_sq, const char* what) {
  if (!(r > norm_sq * (1.0 + 1e-8))) {
    throw ConfigError(std::string("r_prox = ") + std::to_string(r) + " must exceed " + what + " = " +
                      std::to_string(norm_sq));
  }
}

void require_blocks(const BlockProblem& p, std::size_t n, const char* method) {
  if (p.num_blocks() != n) {
    throw ConfigError(std::string(method) + " needs a " + std::to_string(n) + "-block problem, got " +
                      std::to_string(p.num_blocks()) + " blocks");
  }
}

void require_gamma(const MethodConfig& cfg) {
  const double hi = max_gamma(cfg.method);
  if (!(cfg.gamma > 0.0 && cfg.gamma <= hi + 1e-15)) {
    throw ConfigError("gamma = " + std::to_string(cfg.gamma) + " outside (0, " + std::to_string(hi) + "] for " +
                      method_name(cfg.method));
  }
}

}  // namespace detail
}  // namespace pcrate::algorithms
