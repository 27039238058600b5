#include <algorithm>
#include <cmath>

#include "symlti/simd/kernels.hpp"

namespace symlti::simd {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double weighted_dot_scalar(const double* w, const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemm_tn_scalar(std::size_t k, std::size_t m, std::size_t n, const double* a, std::size_t lda,
                    const double* b, std::size_t ldb, double* c, std::size_t ldc) {
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      c[i + j * ldc] = dot_scalar(a + i * lda, b + j * ldb, k);
    }
  }
}

double max_asymmetry_scalar(const double* a, std::size_t n, std::size_t lda) {
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = j + 1; i < n; ++i) {
      worst = std::max(worst, std::abs(a[i + j * lda] - a[j + i * lda]));
    }
  }
  return worst;
}

double max_abs_diff_scalar(const double* x, const double* y, std::size_t n) {
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
  return worst;
}

}  // namespace

namespace detail {
const KernelTable kScalarTable{
    "scalar",        dot_scalar,           weighted_dot_scalar, axpy_scalar, gemm_tn_scalar,
    max_asymmetry_scalar, max_abs_diff_scalar,
};
}  // namespace detail

}  // namespace symlti::simd
