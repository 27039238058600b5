#pragma once

// Data-parallel inner loops used by the grid-discretized operator checks.
//
// Every kernel has a portable scalar reference implementation and, on x86-64,
// an AVX2/FMA variant compiled in its own translation unit. The variant is
// chosen once at runtime from CPUID; setting SYMLTI_SIMD=scalar in the
// environment pins the scalar reference. All matrices are column-major
// (Eigen's default) with explicit leading dimensions.

#include <cstddef>
#include <string_view>

#include "symlti/types.hpp"

namespace symlti::simd {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  std::string_view name;
  /// sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  /// sum_i w[i] * x[i] * y[i]
  double (*weighted_dot)(const double* w, const double* x, const double* y, std::size_t n);
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// C(m x n) = A^T B with A (k x m), B (k x n).
  void (*gemm_tn)(std::size_t k, std::size_t m, std::size_t n, const double* a, std::size_t lda,
                  const double* b, std::size_t ldb, double* c, std::size_t ldc);
  /// max_{i,j} |A(i,j) - A(j,i)| for square A (n x n).
  double (*max_asymmetry)(const double* a, std::size_t n, std::size_t lda);
  /// max_i |x[i] - y[i]|
  double (*max_abs_diff)(const double* x, const double* y, std::size_t n);
};

bool isa_available(Isa isa);
const KernelTable& table(Isa isa);
Isa active_isa();
const KernelTable& active();

// Eigen-facing wrappers over the active table.
double dot(const Vector& x, const Vector& y);
double weighted_dot(const Vector& w, const Vector& x, const Vector& y);
Matrix gemm_tn(const Matrix& a, const Matrix& b);
double max_asymmetry(const Matrix& a);
double max_abs_diff(const Matrix& x, const Matrix& y);

namespace detail {
extern const KernelTable kScalarTable;
#if defined(SYMLTI_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
}  // namespace detail

}  // namespace symlti::simd
