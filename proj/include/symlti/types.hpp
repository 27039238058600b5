#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace symlti {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Numerical policy shared by every module. All thresholds are relative to
/// the scale of the problem they are applied to.
struct Tolerances {
  double feas_tol = 1e-8;  ///< feasibility of linear constraint systems / LMIs
  double null_tol = 1e-10; ///< singular values below null_tol * sigma_max are zero
  double sym_tol = 1e-10;  ///< admissible asymmetry of "symmetric" inputs
};

enum class ErrorCode {
  Dimension,
  InvalidArgument,
  SpectrumOverlap,
  NotHurwitz,
  NotSymmetric,
  ImaginaryAxisEigenvalue,
  NotStabilizable,
  SingularResolvent,
  NegativeTime,
  GridTooCoarse,
  NotMinimal,
  NotControllable,
  Infeasible,
  NonUnique,
  NotInvolution,
  KindClash,
  ThirdInvalid,
  CompatibilityFailed,
  NotPassive,
  SingularFeedthrough,
  PropositionViolated,
  NoConvergence,
  IterateSingular,
  LmiViolated,
  Indefinite,
  FeedthroughNonzero,
  AsymmetricP,
  NotCompatible,
  SignatureNotIdentity,
  BlockDefinitenessFailed,
  NotRelaxation,
  EigenspaceImbalance,
  NotAntiSymplectic,
  PatternMismatch,
  SingularGramian,
  NotReciprocal,
  NotDirac,
  NotLagrangian,
  ConstraintViolated,
  OddDimension,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. Certificate searches attach the
/// minimal residual (Infeasible) or the dimension of the solution family
/// (NonUnique) so callers can report them.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  double residual() const noexcept { return residual_; }
  Error& with_residual(double r) {
    residual_ = r;
    return *this;
  }

  int family_dimension() const noexcept { return family_dimension_; }
  Error& with_family_dimension(int d) {
    family_dimension_ = d;
    return *this;
  }

 private:
  ErrorCode code_;
  double residual_ = std::numeric_limits<double>::quiet_NaN();
  int family_dimension_ = 0;
};

}  // namespace symlti
