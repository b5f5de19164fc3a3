#include "lamb/kernels.hpp"

#include <cmath>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define LAMB_HAVE_X86 1
#define LAMB_AVX2 __attribute__((target("avx2,fma")))
#else
#define LAMB_HAVE_X86 0
#endif

namespace lamb::kernels::avx2 {

#if LAMB_HAVE_X86

namespace {

LAMB_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

LAMB_AVX2 double sum_squares(std::span<const double> x) {
  const double* p = x.data();
  const std::size_t n = x.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256d a = _mm256_loadu_pd(p + i);
    __m256d b = _mm256_loadu_pd(p + i + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += p[i] * p[i];
  return s;
}

LAMB_AVX2 double dot(std::span<const double> x, std::span<const double> y) {
  const double* p = x.data();
  const double* q = y.data();
  const std::size_t n = x.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(p + i), _mm256_loadu_pd(q + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(p + i + 4), _mm256_loadu_pd(q + i + 4), acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += p[i] * q[i];
  return s;
}

LAMB_AVX2 double max_abs(std::span<const double> x) {
  const double* p = x.data();
  const std::size_t n = x.size();
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    m = _mm256_max_pd(m, _mm256_andnot_pd(sign, _mm256_loadu_pd(p + i)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = std::fmax(std::fmax(lanes[0], lanes[1]), std::fmax(lanes[2], lanes[3]));
  for (; i < n; ++i) r = std::fmax(r, std::fabs(p[i]));
  return r;
}

LAMB_AVX2 void axpy(double a, std::span<const double> x, std::span<double> y) {
  const double* p = x.data();
  double* q = y.data();
  const std::size_t n = x.size();
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_fmadd_pd(va, _mm256_loadu_pd(p + i), _mm256_loadu_pd(q + i));
    _mm256_storeu_pd(q + i, r);
  }
  for (; i < n; ++i) q[i] += a * p[i];
}

#else

double sum_squares(std::span<const double> x) { return scalar::sum_squares(x); }
double dot(std::span<const double> x, std::span<const double> y) { return scalar::dot(x, y); }
double max_abs(std::span<const double> x) { return scalar::max_abs(x); }
void axpy(double a, std::span<const double> x, std::span<double> y) { scalar::axpy(a, x, y); }

#endif

}  // namespace lamb::kernels::avx2
