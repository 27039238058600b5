#pragma once

// Canonical forms of certified systems: pseudo-gradient and port-Hamiltonian
// forms of reciprocal systems, the derivative-output port-Hamiltonian form of
// IO-Hamiltonian systems, the (q, p) normal forms and the Riccati spectral
// factorization K(s) = M(s) M^T(-s).

#include "symlti/certify.hpp"
#include "symlti/passivity.hpp"

namespace symlti {

/// State-space realization with possibly non-square input/output maps.
struct Realization {
  Matrix A;
  Matrix B;
  Matrix C;
  Matrix D;
};
CMatrix realization_transfer(const Realization& r, Complex s);
Realization as_realization(const StateSpaceSystem& sys);
/// max over samples of ||K1(s) - K2(s)|| / (1 + ||K1(s)||).
double transfer_deviation(const Realization& r1, const Realization& r2, const std::vector<Complex>& samples);

struct PseudoGradientForm {
  Matrix G;
  Matrix P;  ///< -G A
  Matrix C;
  Matrix D;
  Vector sigma;
  double reconstruction_residual = 0.0;  ///< ||A + G^{-1}P|| + ||B - G^{-1}C^T sigma||
};
PseudoGradientForm to_pseudo_gradient(const StateSpaceSystem& sys, const Certificate& g, const Tolerances& tol = {});

struct CompatibleCoordinates {
  Matrix T;   ///< x = T (x1, x2)
  Matrix Q1;  ///< block on the +1 eigenspace of Q^{-1} G
  Matrix Q2;  ///< block on the -1 eigenspace
  double residual = 0.0;  ///< deviation of T^T Q T, T^T G T from the block pattern
};
CompatibleCoordinates compatible_coordinates(const Matrix& g, const Matrix& q, const Tolerances& tol = {});

struct PortHamiltonianForm {
  Matrix T;  ///< z = T x
  Matrix J;  ///< skew interconnection [[0, -Pc], [Pc^T, 0]]
  Matrix R;  ///< dissipation diag(P1, -P2)
  Matrix Q1;
  Matrix Q2;
  Matrix P1;
  Matrix P2;
  Matrix Pc;
  Matrix hamiltonian;  ///< H(z) = 1/2 z^T hamiltonian z
  Realization realization;  ///< dynamics in z
  double transfer_residual = 0.0;
};
PortHamiltonianForm to_port_hamiltonian(const StateSpaceSystem& sys, const Certificate& g, const Matrix& q,
                                        const Tolerances& tol = {});
PortHamiltonianForm relaxation_port_form(const StateSpaceSystem& sys, const Certificate& g, const Tolerances& tol = {});

struct DerivativeOutputForm {
  Matrix J;  ///< Omega^{-1}
  Matrix Q;  ///< Omega A
  Realization realization;  ///< (A, -J C^T, C J Q, -C J C^T), output z = dy/dt
  double qjq_skewness = 0.0;  ///< ||QJQ + (QJQ)^T||
  double cjc_skewness = 0.0;  ///< ||CJC^T + (CJC^T)^T||
  double transfer_residual = 0.0;  ///< against s K(s)
};
DerivativeOutputForm io_ham_to_port_ham(const StateSpaceSystem& sys, const Certificate& omega, const Tolerances& tol = {});

struct NormalForm {
  Matrix T;  ///< x = T (q, p)
  StateSpaceSystem transformed;
  Matrix Omega;  ///< T^T Omega T
  Matrix second;  ///< T^T W T or T^T G T
  // Blocks of the (q, p) pattern.
  Matrix F, P, S, H;  ///< nonnegative form: A = [[F, -P], [-S, -F^T]], B = [0; H^T], C = [H, 0]
  Matrix Qblock, Bt;  ///< time-reversible form: A = [[0, P], [-Q, 0]], B = [0; Bt], C = [Bt^T, 0]
  double canonical_residual = 0.0;  ///< ||Omega~ - Jc|| + ||second~ - pattern||
  double pattern_residual = 0.0;    ///< size of the blocks that must vanish
};
NormalForm nonneg_normal_form(const StateSpaceSystem& sys, const Certificate& omega, const Matrix& w,
                              const Tolerances& tol = {});
NormalForm time_reversible_normal_form(const StateSpaceSystem& sys, const Certificate& omega, const Certificate& r,
                                       const Tolerances& tol = {});

struct FactorizationForm {
  Matrix F, P, S, H;
  Matrix X;
  Matrix P_factor;
  Realization M;  ///< (F - P X, P_factor, H, 0)
  double riccati_residual = 0.0;
  double identity_residual = 0.0;  ///< max |K(iw) - M(iw) M^T(-iw)| over 20 log-spaced w
  bool nonnegative_on_axis = false;
};
FactorizationForm spectral_factorize(const Matrix& f, const Matrix& p, const Matrix& s, const Matrix& h,
                                     const Tolerances& tol = {});

}  // namespace symlti
