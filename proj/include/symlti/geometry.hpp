#pragma once

// Lagrangian subspaces and Dirac structures of F x E = R^n x R^n, and grid
// discretizations of the Hankel and Volterra operators of a system.

#include <optional>
#include <vector>

#include "symlti/certify.hpp"

namespace symlti {

/// Subspace of R^{2n} = F x E, stored through an orthonormal basis.
/// Coordinates are ordered (f_1..f_n, e_1..e_n).
class LinearSubspace {
 public:
  LinearSubspace() = default;
  /// Orthonormalizes the span of the columns; ambient must be even.
  static LinearSubspace span(const Matrix& columns, const Tolerances& tol = {});
  static LinearSubspace zero(Eigen::Index n);
  static LinearSubspace whole(Eigen::Index n);
  /// {(f, S f)}
  static LinearSubspace graph(const Matrix& s);
  /// {(S e, e)}
  static LinearSubspace cograph(const Matrix& s);
  /// K x K^perp for K = span(columns) in R^n.
  static LinearSubspace product_with_annihilator(const Matrix& k_columns, const Tolerances& tol = {});

  Eigen::Index half() const { return half_; }
  Eigen::Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }
  auto f_part() const { return basis_.topRows(half_); }
  auto e_part() const { return basis_.bottomRows(half_); }

 private:
  LinearSubspace(Eigen::Index half, Matrix basis) : half_(half), basis_(std::move(basis)) {}
  Eigen::Index half_ = 0;
  Matrix basis_;
};

enum class PairingForm { Symplectic, Plus };

/// [[0, -I], [I, 0]] or [[0, I], [I, 0]].
Matrix pairing_matrix(Eigen::Index n, PairingForm form);
double pairing(const Vector& a, const Vector& b, PairingForm form);

LinearSubspace orthogonal_companion(const LinearSubspace& s, PairingForm form, const Tolerances& tol = {});
/// Largest sine of the principal angles (1 if the dimensions differ).
double subspace_distance(const LinearSubspace& a, const LinearSubspace& b);
bool same_subspace(const LinearSubspace& a, const LinearSubspace& b, double tol = 1e-9);

bool is_lagrangian(const LinearSubspace& s, const Tolerances& tol = {});
bool is_dirac(const LinearSubspace& s, const Tolerances& tol = {});

struct SeparabilityResult {
  bool separable = false;
  double cross_pairing = 0.0;  ///< max |<e_b, f_a>| over basis pairs
  Matrix K;                    ///< orthonormal basis of the f-projection
  double product_distance = 0.0;  ///< distance between S and K x K^perp
};
SeparabilityResult separable_test(const LinearSubspace& s, const Tolerances& tol = {});

struct HybridRepresentation {
  std::vector<Eigen::Index> i1;  ///< parametrized by f_i, ascending
  std::vector<Eigen::Index> i2;  ///< parametrized by e_i, ascending
  Matrix S;                      ///< (e^1, f^2) = S (f^1, e^2)
  Vector signature;              ///< diag(I_{n1}, -I_{n2})
  double signature_residual = 0.0;  ///< ||Sigma S - S^T Sigma||
  double graph_residual = 0.0;      ///< distance of the represented subspace to S
};
HybridRepresentation hybrid_representation(const LinearSubspace& s, const Tolerances& tol = {});
/// Lifts a parameter (f^1, e^2) to the full vector (f, e).
Vector hybrid_point(const HybridRepresentation& h, const Vector& parameter);
/// 1/2 p^T Sigma S p; its gradient Sigma S p equals (e^1, -f^2).
double generating_function(const HybridRepresentation& h, const Vector& parameter);

struct KernelRepresentation {
  Matrix F, E;  ///< S = ker [F E]
  double skew_residual = 0.0;    ///< ||F E^T + E F^T||
  double kernel_residual = 0.0;  ///< ||[F E] basis||
  Eigen::Index rank = 0;
};
KernelRepresentation kernel_representation(const LinearSubspace& s, const Tolerances& tol = {});

struct HankelGrid {
  double horizon = 15.0;
  double step = 1e-3;
};

struct DiscretizedHankelReport {
  Eigen::Index cells = 0;
  double step = 0.0;
  double horizon = 0.0;
  double symmetry_residual = 0.0;  ///< ||H_d - H_d^T||_F / ||H_d||_F
  double form_residual = 0.0;      ///< symplectic form on graph pairs, relative
  bool symmetric = false;
  Vector eigenvalues;  ///< the n possibly nonzero eigenvalues, by decreasing modulus
  double eigen_imag = 0.0;
  bool explicit_matrix = false;  ///< H_d was assembled and decomposed densely
  Matrix matrix;                 ///< H_d when assembled
};
/// Midpoint grid matrix of sigma H with kernel sigma C e^{A(t+tau)} B.
/// A supplied certificate must verify; without one the check still runs.
DiscretizedHankelReport discretized_hankel_check(const StateSpaceSystem& sys, const std::optional<Certificate>& g,
                                                 const HankelGrid& grid, Eigen::Index explicit_limit = 800,
                                                 const Tolerances& tol = {});

struct VolterraWindow {
  double alpha = 0.0;
  double beta = 1.0;
  Eigen::Index cells = 200;
};

struct VolterraReport {
  Eigen::Index cells = 0;
  double step = 0.0;
  Matrix kernel;      ///< block lower triangular, blocks sigma V_ij
  Matrix constraint;  ///< n x (cells m)
  Matrix basis;       ///< orthonormal basis U of ker constraint (identity if unconstrained)
  double symmetry_residual = 0.0;  ///< ||U^T (V - V^T) U|| / ||U^T V U||
  bool symmetric = false;
  Definiteness definiteness = Definiteness::Zero;
  bool psd = false;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  Vector negative_witness;  ///< input in ker M with the most negative value (empty if none)
  Vector positive_witness;
};
VolterraReport constrained_volterra_check(const StateSpaceSystem& sys, const Certificate& omega,
                                          const VolterraWindow& window = {}, bool constrained = true,
                                          const Tolerances& tol = {});

struct FunctionalValue {
  double value = 0.0;        ///< 1/2 int u^T sigma y with y from state recursion
  double kernel_value = 0.0; ///< 1/2 u^T sym(V) u
  double constraint_residual = 0.0;
};
/// u stacks the cell values (cell-major, m entries per cell).
FunctionalValue generating_functional_value(const StateSpaceSystem& sys, const Certificate& omega, const Vector& u,
                                            const VolterraWindow& window = {}, const Tolerances& tol = {});

}  // namespace symlti
