#pragma once

#include <memory>
#include <vector>

#include "pcrate/algorithms.hpp"

namespace pcrate::algorithms::detail {

/// Dense matrix from a grid of blocks. Row heights and column widths are
/// taken from the non-empty blocks; empty (0x0) entries are zero blocks.
DenseMatrix from_blocks(const std::vector<std::vector<DenseMatrix>>& grid);

DenseMatrix zeros(std::size_t r, std::size_t c);

std::unique_ptr<Method> make_gpalm(const MethodConfig& cfg, const BlockProblem& p);
std::unique_ptr<Method> make_admm(const MethodConfig& cfg, const BlockProblem& p);
std::unique_ptr<Method> make_ladmm(const MethodConfig& cfg, const BlockProblem& p);
std::unique_ptr<Method> make_multiblock(const MethodConfig& cfg, const BlockProblem& p);
std::unique_ptr<Method> make_padmm(const MethodConfig& cfg, const BlockProblem& p);

/// Squared spectral norm with the strict margin used for r > ||A||^2.
void require_r_above(double r, double norm_sq, const char* what);
void require_blocks(const BlockProblem& p, std::size_t n, const char* method);
void require_gamma(const MethodConfig& cfg);


}  // namespace pcrate::algorithms::detail
