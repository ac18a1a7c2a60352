#include <atomic>
#include <cstdlib>
#include <string>

#include "pcrate/error.hpp"
#include "pcrate/linalg/kernels.hpp"

namespace pcrate::linalg::kernels {

#ifdef PCRATE_HAVE_AVX2_KERNELS
const KernelTable* avx2_table_impl();
#endif

namespace {

bool cpu_has_avx2() {
#if defined(PCRATE_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* detect() {
  if (const char* env = std::getenv("PCRATE_ISA")) {
    const std::string want(env);
    if (want == "scalar") return &scalar_table();
    if (want == "avx2" && isa_supported(Isa::Avx2)) return avx2_table();
  }
  if (isa_supported(Isa::Avx2)) return avx2_table();
  return &scalar_table();
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

const KernelTable* avx2_table() {
#ifdef PCRATE_HAVE_AVX2_KERNELS
  return avx2_table_impl();
#else
  return nullptr;
#endif
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
      return avx2_table() != nullptr && cpu_has_avx2();
  }
  return false;
}

const KernelTable& active() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (t == nullptr) {
    const KernelTable* detected = detect();
    // first writer wins; every thread then sees the same table
    g_active.compare_exchange_strong(t, detected, std::memory_order_acq_rel);
    t = g_active.load(std::memory_order_acquire);
  }
  return *t;
}

void select_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw ConfigError("kernel variant '" + std::string(isa_name(isa)) +
                      "' is not available on this build/CPU");
  }
  g_active.store(isa == Isa::Scalar ? &scalar_table() : avx2_table(),
                 std::memory_order_release);
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace pcrate::linalg::kernels
