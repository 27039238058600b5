#include <cstdlib>
#include <cstring>

#include "symlti/simd/kernels.hpp"

namespace symlti::simd {

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(SYMLTI_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
#if defined(SYMLTI_HAVE_AVX2)
  if (isa == Isa::Avx2) {
    if (!isa_available(Isa::Avx2)) {
      throw Error(ErrorCode::InvalidArgument, "AVX2/FMA kernels requested on a CPU without them");
    }
    return detail::kAvx2Table;
  }
#else
  if (isa == Isa::Avx2) {
    throw Error(ErrorCode::InvalidArgument, "AVX2 kernels were not compiled into this build");
  }
#endif
  return detail::kScalarTable;
}

namespace {
Isa select_isa() {
  if (const char* env = std::getenv("SYMLTI_SIMD"); env != nullptr && std::strcmp(env, "scalar") == 0) {
    return Isa::Scalar;
  }
  return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}
}  // namespace

Isa active_isa() {
  static const Isa isa = select_isa();
  return isa;
}

const KernelTable& active() {
  static const KernelTable& t = table(active_isa());
  return t;
}

double dot(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw Error(ErrorCode::Dimension, "dot: length mismatch");
  return active().dot(x.data(), y.data(), static_cast<std::size_t>(x.size()));
}

double weighted_dot(const Vector& w, const Vector& x, const Vector& y) {
  if (x.size() != y.size() || w.size() != x.size()) {
    throw Error(ErrorCode::Dimension, "weighted_dot: length mismatch");
  }
  return active().weighted_dot(w.data(), x.data(), y.data(), static_cast<std::size_t>(x.size()));
}

Matrix gemm_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw Error(ErrorCode::Dimension, "gemm_tn: inner dimension mismatch");
  Matrix c(a.cols(), b.cols());
  if (c.size() == 0) return c;
  if (a.rows() == 0) {
    c.setZero();
    return c;
  }
  active().gemm_tn(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(a.cols()),
                   static_cast<std::size_t>(b.cols()), a.data(), static_cast<std::size_t>(a.rows()),
                   b.data(), static_cast<std::size_t>(b.rows()), c.data(),
                   static_cast<std::size_t>(c.rows()));
  return c;
}

double max_asymmetry(const Matrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::Dimension, "max_asymmetry: matrix not square");
  if (a.size() == 0) return 0.0;
  return active().max_asymmetry(a.data(), static_cast<std::size_t>(a.rows()),
                                static_cast<std::size_t>(a.rows()));
}

double max_abs_diff(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw Error(ErrorCode::Dimension, "max_abs_diff: shape mismatch");
  }
  if (x.size() == 0) return 0.0;
  return active().max_abs_diff(x.data(), y.data(), static_cast<std::size_t>(x.size()));
}

}  // namespace symlti::simd
