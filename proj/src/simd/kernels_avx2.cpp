// Compiled with -mavx2 -mfma; never called unless the CPU reports both.

#include <immintrin.h>

#include <cmath>

#include "actitrait/simd/kernels.hpp"

namespace actitrait::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline __m256d abs_pd(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

void resultants_avx2(const double* x, const double* y, const double* z, double* out,
                     std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    const __m256d vz = _mm256_loadu_pd(z + i);
    __m256d acc = _mm256_mul_pd(vx, vx);
    acc = _mm256_fmadd_pd(vy, vy, acc);
    acc = _mm256_fmadd_pd(vz, vz, acc);
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(acc));
  }
  for (; i < n; ++i) out[i] = std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]);
}

double sum_avx2(const double* v, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_add_pd(a0, _mm256_loadu_pd(v + i));
    a1 = _mm256_add_pd(a1, _mm256_loadu_pd(v + i + 4));
  }
  for (; i + 4 <= n; i += 4) a0 = _mm256_add_pd(a0, _mm256_loadu_pd(v + i));
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += v[i];
  return s;
}

double sum_abs_dev_avx2(const double* v, std::size_t n, double center) {
  const __m256d c = _mm256_set1_pd(center);
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_add_pd(a0, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(v + i), c)));
    a1 = _mm256_add_pd(a1, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(v + i + 4), c)));
  }
  for (; i + 4 <= n; i += 4) a0 = _mm256_add_pd(a0, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(v + i), c)));
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += std::fabs(v[i] - center);
  return s;
}

double sum_sq_dev_avx2(const double* v, std::size_t n, double center) {
  const __m256d c = _mm256_set1_pd(center);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v + i), c);
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = v[i] - center;
    s += d * d;
  }
  return s;
}

MaskedDot masked_dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  __m256d cnt = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    // ordered compare against itself is false exactly for NaN lanes
    const __m256d mask =
        _mm256_and_pd(_mm256_cmp_pd(va, va, _CMP_ORD_Q), _mm256_cmp_pd(vb, vb, _CMP_ORD_Q));
    acc = _mm256_add_pd(acc, _mm256_and_pd(mask, _mm256_mul_pd(va, vb)));
    cnt = _mm256_add_pd(cnt, _mm256_and_pd(mask, one));
  }
  MaskedDot r{hsum(acc), static_cast<std::size_t>(hsum(cnt))};
  for (; i < n; ++i) {
    if (std::isnan(a[i]) || std::isnan(b[i])) continue;
    r.sum += a[i] * b[i];
    ++r.count;
  }
  return r;
}

double squared_distance_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

constexpr KernelTable kAvx2{
    Backend::Avx2,    resultants_avx2, sum_avx2,        sum_abs_dev_avx2,
    sum_sq_dev_avx2,  masked_dot_avx2, squared_distance_avx2,
};

}  // namespace

const KernelTable& avx2_kernels() noexcept { return kAvx2; }

}  // namespace actitrait::simd
