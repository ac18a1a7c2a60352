#pragma once

// Data-parallel inner loops behind the dense types. Each kernel has a scalar
// reference implementation and, on x86-64, an AVX2/FMA variant. The variant
// is chosen once per process from the CPU features (override with the
// PCRATE_ISA environment variable: "scalar" or "avx2").
//
// All matrices are row-major and densely packed.

#include <cstddef>
#include <string_view>

namespace pcrate::linalg::kernels {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = A x, A is rows x cols
  void (*gemv)(const double* a, std::size_t rows, std::size_t cols, const double* x, double* y);
  // y = A^T x, A is rows x cols, y has cols entries
  void (*gemv_t)(const double* a, std::size_t rows, std::size_t cols, const double* x,
                 double* y);
  // c = A B, A is m x k, B is k x n, c is m x n
  void (*gemm)(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
               std::size_t n);
};

const KernelTable& scalar_table();

/// nullptr when the variant was not compiled in.
const KernelTable* avx2_table();

bool isa_supported(Isa isa);

/// The table in use. Selected lazily on first call.
const KernelTable& active();

/// Forces a kernel variant for the rest of the process (tests, benchmarks).
/// Throws ConfigError when the CPU or the build lacks it.
void select_isa(Isa isa);

std::string_view isa_name(Isa isa);

}  // namespace pcrate::linalg::kernels
