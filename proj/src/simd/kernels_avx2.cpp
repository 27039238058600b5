// AVX2/FMA variants. This translation unit is the only one compiled with
// -mavx2 -mfma; it is reached exclusively through the dispatch table after a
// CPUID check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "symlti/simd/kernels.hpp"

namespace symlti::simd {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

inline __m256d vabs(__m256d v) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  return _mm256_andnot_pd(sign, v);
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 8), _mm256_loadu_pd(y + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 12), _mm256_loadu_pd(y + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double s = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double weighted_dot_avx2(const double* w, const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d p0 = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i));
    const __m256d p1 = _mm256_mul_pd(_mm256_loadu_pd(w + i + 4), _mm256_loadu_pd(x + i + 4));
    acc0 = _mm256_fmadd_pd(p0, _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(p1, _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i));
    acc0 = _mm256_fmadd_pd(p, _mm256_loadu_pd(y + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

// One column of A against four columns of B per pass.
void gemm_tn_avx2(std::size_t k, std::size_t m, std::size_t n, const double* a, std::size_t lda,
                  const double* b, std::size_t ldb, double* c, std::size_t ldc) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const double* b0 = b + (j + 0) * ldb;
    const double* b1 = b + (j + 1) * ldb;
    const double* b2 = b + (j + 2) * ldb;
    const double* b3 = b + (j + 3) * ldb;
    for (std::size_t i = 0; i < m; ++i) {
      const double* ai = a + i * lda;
      __m256d s0 = _mm256_setzero_pd();
      __m256d s1 = _mm256_setzero_pd();
      __m256d s2 = _mm256_setzero_pd();
      __m256d s3 = _mm256_setzero_pd();
      std::size_t p = 0;
      for (; p + 4 <= k; p += 4) {
        const __m256d av = _mm256_loadu_pd(ai + p);
        s0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b0 + p), s0);
        s1 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b1 + p), s1);
        s2 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b2 + p), s2);
        s3 = _mm256_fmadd_pd(av, _mm256_loadu_pd(b3 + p), s3);
      }
      double r0 = hsum(s0), r1 = hsum(s1), r2 = hsum(s2), r3 = hsum(s3);
      for (; p < k; ++p) {
        r0 += ai[p] * b0[p];
        r1 += ai[p] * b1[p];
        r2 += ai[p] * b2[p];
        r3 += ai[p] * b3[p];
      }
      c[i + (j + 0) * ldc] = r0;
      c[i + (j + 1) * ldc] = r1;
      c[i + (j + 2) * ldc] = r2;
      c[i + (j + 3) * ldc] = r3;
    }
  }
  for (; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) c[i + j * ldc] = dot_avx2(a + i * lda, b + j * ldb, k);
  }
}

double max_asymmetry_avx2(const double* a, std::size_t n, std::size_t lda) {
  __m256d worst = _mm256_setzero_pd();
  double tail = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double* col = a + j * lda;
    std::size_t i = j + 1;
    for (; i + 4 <= n; i += 4) {
      const __m256d lower = _mm256_loadu_pd(col + i);
      const __m256d upper = _mm256_set_pd(a[j + (i + 3) * lda], a[j + (i + 2) * lda],
                                          a[j + (i + 1) * lda], a[j + i * lda]);
      worst = _mm256_max_pd(worst, vabs(_mm256_sub_pd(lower, upper)));
    }
    for (; i < n; ++i) tail = std::max(tail, std::abs(col[i] - a[j + i * lda]));
  }
  return std::max(hmax(worst), tail);
}

double max_abs_diff_avx2(const double* x, const double* y, std::size_t n) {
  __m256d worst = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    worst = _mm256_max_pd(worst, vabs(_mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i))));
  }
  double tail = 0.0;
  for (; i < n; ++i) tail = std::max(tail, std::abs(x[i] - y[i]));
  return std::max(hmax(worst), tail);
}

}  // namespace

namespace detail {
const KernelTable kAvx2Table{
    "avx2",          dot_avx2,          weighted_dot_avx2, axpy_avx2, gemm_tn_avx2,
    max_asymmetry_avx2, max_abs_diff_avx2,
};
}  // namespace detail

}  // namespace symlti::simd
