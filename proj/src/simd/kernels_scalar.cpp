#include <cmath>

#include "actitrait/simd/kernels.hpp"

namespace actitrait::simd {
namespace {

void resultants_scalar(const double* x, const double* y, const double* z, double* out,
                       std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]);
}

double sum_scalar(const double* v, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += v[i];
  return s;
}

double sum_abs_dev_scalar(const double* v, std::size_t n, double center) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::fabs(v[i] - center);
  return s;
}

double sum_sq_dev_scalar(const double* v, std::size_t n, double center) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = v[i] - center;
    s += d * d;
  }
  return s;
}

MaskedDot masked_dot_scalar(const double* a, const double* b, std::size_t n) {
  MaskedDot r;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(a[i]) || std::isnan(b[i])) continue;
    r.sum += a[i] * b[i];
    ++r.count;
  }
  return r;
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

constexpr KernelTable kScalar{
    Backend::Scalar,    resultants_scalar, sum_scalar,        sum_abs_dev_scalar,
    sum_sq_dev_scalar,  masked_dot_scalar, squared_distance_scalar,
};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace actitrait::simd
