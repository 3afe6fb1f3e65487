#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference
// implementation; vector variants are selected once at startup from the CPU
// feature bits and can be forced with ACTITRAIT_SIMD=scalar|avx2 or
// set_backend(). Vector variants reassociate sums, so results agree with the
// scalar path to rounding, not bit-for-bit.

#include <cstddef>
#include <span>
#include <string_view>

namespace actitrait::simd {

enum class Backend { Scalar, Avx2 };

struct MaskedDot {
  double sum = 0.0;
  std::size_t count = 0;
};

struct KernelTable {
  Backend backend;
  // out[i] = sqrt(x[i]^2 + y[i]^2 + z[i]^2)
  void (*resultants)(const double* x, const double* y, const double* z, double* out,
                     std::size_t n);
  double (*sum)(const double* v, std::size_t n);
  // sum |v[i] - center|
  double (*sum_abs_dev)(const double* v, std::size_t n, double center);
  // sum (v[i] - center)^2
  double (*sum_sq_dev)(const double* v, std::size_t n, double center);
  // sum a[i]*b[i] over indices where neither is NaN, plus that index count
  MaskedDot (*masked_dot)(const double* a, const double* b, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
// Defined only in x86-64 builds; only callable when
// backend_supported(Backend::Avx2).
const KernelTable& avx2_kernels() noexcept;

bool backend_supported(Backend b) noexcept;
Backend active_backend() noexcept;
// Throws PreconditionError for a backend the CPU or build cannot run.
void set_backend(Backend b);
std::string_view backend_name(Backend b) noexcept;

const KernelTable& kernels() noexcept;

inline void resultants(std::span<const double> x, std::span<const double> y,
                       std::span<const double> z, std::span<double> out) {
  kernels().resultants(x.data(), y.data(), z.data(), out.data(), out.size());
}
inline double sum(std::span<const double> v) { return kernels().sum(v.data(), v.size()); }
inline double sum_abs_dev(std::span<const double> v, double center) {
  return kernels().sum_abs_dev(v.data(), v.size(), center);
}
inline double sum_sq_dev(std::span<const double> v, double center) {
  return kernels().sum_sq_dev(v.data(), v.size(), center);
}
inline MaskedDot masked_dot(std::span<const double> a, std::span<const double> b) {
  return kernels().masked_dot(a.data(), b.data(), a.size());
}
inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  return kernels().squared_distance(a.data(), b.data(), a.size());
}

}  // namespace actitrait::simd
