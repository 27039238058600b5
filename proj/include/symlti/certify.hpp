#pragma once

// Structure certificates: reciprocity metric G, IO-Hamiltonian symplectic
// form Omega, signed and plain time-reversal involutions R and the lossless
// storage Q. Each search is a structured linear solve followed by a
// frequency-domain cross-check.

#include <optional>
#include <string>
#include <vector>

#include "symlti/lti.hpp"
#include "symlti/matcore.hpp"

namespace symlti {

enum class CertificateKind { Reciprocal, IOHamiltonian, SignedTimeReversible, TimeReversible, CycloLossless };
std::string_view to_string(CertificateKind kind);

struct Certificate {
  CertificateKind kind = CertificateKind::Reciprocal;
  Matrix matrix;
  double algebraic_residual = 0.0;
  double frequency_residual = 0.0;
  std::optional<Definiteness> definiteness;  ///< symmetric kinds only
};

enum class Verdict { True, False, Unknown };
std::string_view to_string(Verdict v);

struct VerdictReport {
  Verdict reciprocal = Verdict::Unknown;
  Verdict io_hamiltonian = Verdict::Unknown;
  Verdict signed_time_reversible = Verdict::Unknown;
  Verdict time_reversible = Verdict::Unknown;
  Verdict cyclo_lossless = Verdict::Unknown;
  Verdict passive = Verdict::Unknown;
  Verdict relaxation = Verdict::Unknown;
  std::vector<Certificate> certificates;
  std::vector<std::string> notes;
};

/// Relative residual of the defining linear equations, normalized by
/// 1 + ||M|| (||A|| + ||B|| + ||C||) + ||B|| + ||C|| + ||D||.
double algebraic_residual(const StateSpaceSystem& sys, CertificateKind kind, const Matrix& m);
/// max over frequency_samples of the defining transfer identity, each sample
/// normalized by 1 + ||K||.
double frequency_residual(const StateSpaceSystem& sys, CertificateKind kind);

Certificate find_reciprocal_G(const StateSpaceSystem& sys, bool require_minimal = false, const Tolerances& tol = {});
Certificate find_io_hamiltonian_Omega(const StateSpaceSystem& sys, bool require_minimal = false,
                                      const Tolerances& tol = {});
Certificate find_signed_time_reversal(const StateSpaceSystem& sys, const Tolerances& tol = {});
Certificate find_time_reversal(const StateSpaceSystem& sys, const Tolerances& tol = {});
Certificate find_cyclo_lossless_Q(const StateSpaceSystem& sys, const Tolerances& tol = {});
Certificate find_certificate(const StateSpaceSystem& sys, CertificateKind kind, const Tolerances& tol = {});

struct CertificateCheck {
  double algebraic_residual = 0.0;
  double frequency_residual = 0.0;
  double structure_residual = 0.0;  ///< asymmetry, skewness defect or ||R^2 - I||
  double min_singular_value = 0.0;
  bool valid = false;
};
/// Re-evaluates every defining condition of cert against sys.
CertificateCheck verify_certificate(const StateSpaceSystem& sys, const Certificate& cert, const Tolerances& tol = {});

/// Given two valid certificates among {IOHamiltonian, Reciprocal,
/// TimeReversible}, composes the third (R = Omega^{-1} G, Omega = G R,
/// G = Omega R) and verifies it.
Certificate two_of_three(const StateSpaceSystem& sys, const Certificate& first, const Certificate& second,
                         const Tolerances& tol = {});

struct LosslessReciprocalReversal {
  Certificate R;        ///< SignedTimeReversible, R = Q^{-1} G
  bool d_zero = false;
  bool compatible = false;  ///< ||Q - G Q^{-1} G|| <= tol
  double compatibility_residual = 0.0;
};
LosslessReciprocalReversal reversal_from_lossless_reciprocal(const StateSpaceSystem& sys, const Certificate& q,
                                                             const Certificate& g, const Tolerances& tol = {});

/// Recovers G from simulated input/output data on the horizon [-T, T] with
/// step h: n(n+1)/2 steering experiments reach the states e_i and e_i + e_j,
/// and the symmetric G is fit to x(0)^T G x(0) = int_0^T u(-t)^T sigma y(t) dt.
Matrix estimate_G_from_io(const StateSpaceSystem& sys, double horizon, double h, const Tolerances& tol = {});

/// One experiment of the estimator: returns (reached x(0), integral value).
std::pair<Vector, double> memory_experiment(const StateSpaceSystem& sys, const Vector& target, double horizon,
                                            double h);

/// Runs every certificate search and fills the five structural verdicts.
VerdictReport certify_structures(const StateSpaceSystem& sys, const Tolerances& tol = {});

}  // namespace symlti
