#include <atomic>
#include <cstdlib>
#include <string>

#include "actitrait/error.hpp"
#include "actitrait/simd/kernels.hpp"

namespace actitrait::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(ACTITRAIT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& table_for(Backend b) noexcept {
#if defined(ACTITRAIT_HAVE_AVX2)
  if (b == Backend::Avx2) return avx2_kernels();
#endif
  (void)b;
  return scalar_kernels();
}

const KernelTable* initial_table() noexcept {
  Backend b = cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
  if (const char* env = std::getenv("ACTITRAIT_SIMD")) {
    const std::string v = env;
    if (v == "scalar") b = Backend::Scalar;
    else if (v == "avx2" && cpu_has_avx2()) b = Backend::Avx2;
  }
  return &table_for(b);
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

bool backend_supported(Backend b) noexcept {
  return b == Backend::Scalar || (b == Backend::Avx2 && cpu_has_avx2());
}

Backend active_backend() noexcept { return kernels().backend; }

void set_backend(Backend b) {
  if (!backend_supported(b))
    throw PreconditionError("SIMD backend not supported on this CPU: " +
                            std::string(backend_name(b)));
  current().store(&table_for(b), std::memory_order_release);
}

std::string_view backend_name(Backend b) noexcept {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

const KernelTable& kernels() noexcept { return *current().load(std::memory_order_acquire); }

}  // namespace actitrait::simd
