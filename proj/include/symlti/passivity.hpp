#pragma once

// Passivity via the KYP inequality
//   [ -A^T Q - Q A    C^T - Q B ]
//   [  C - B^T Q      D + D^T   ]  >= 0,
// extreme storages from the positive-real Riccati equation, the
// compatibility fixed point Q = G Q^{-1} G, relaxation systems and the
// cyclo-passive storage W = Omega W^{-1} Omega of IO-Hamiltonian systems.

#include <vector>

#include "symlti/certify.hpp"

namespace symlti {

enum class StorageKind { MinStorage, MaxStorage, Compatible, Generic };
std::string_view to_string(StorageKind kind);

struct StorageCertificate {
  Matrix Q;
  Vector slack_spectrum;  ///< eigenvalues of the LMI slack, ascending
  bool lossless = false;
  StorageKind kind = StorageKind::Generic;
};

enum class StorageObjective { Min, Max };

Matrix lmi_slack(const StateSpaceSystem& sys, const Matrix& q);
/// Eigenvalues of lmi_slack, ascending.
Vector lmi_slack_spectrum(const StateSpaceSystem& sys, const Matrix& q);
/// Smallest slack eigenvalue >= -feas_tol * (1 + ||slack||).
bool satisfies_lmi(const StateSpaceSystem& sys, const Matrix& q, const Tolerances& tol = {});

StorageCertificate kyp_storage(const StateSpaceSystem& sys, StorageObjective objective, const Tolerances& tol = {});

struct KernelInvarianceReport {
  Matrix kernel;  ///< orthonormal basis of ker Q
  double invariance_residual = 0.0;  ///< ||(I - K K^T) A K||
  double output_residual = 0.0;      ///< ||C K||
  bool observable = false;
};
KernelInvarianceReport kernel_invariance_check(const StateSpaceSystem& sys, const StorageCertificate& q,
                                               const Tolerances& tol = {});

struct CompatibleStorage {
  StorageCertificate storage;  ///< kind = Compatible
  int iterations = 0;
  double residual = 0.0;  ///< ||Q - G Q^{-1} G|| / ||Q||
  std::vector<double> slack_min_history;  ///< min LMI slack eigenvalue per iterate, starting with Q0
  bool initial_lmi_ok = false;
};
CompatibleStorage compatible_Q(const StateSpaceSystem& sys, const Certificate& g, const Matrix& q0,
                               const Tolerances& tol = {});

struct RelaxationVerdict {
  bool is_relaxation = false;
  std::optional<Matrix> G;
  bool GA_psd = false;  ///< P = -G A is positive semidefinite
  double dissipation_slack_min = 0.0;  ///< LMI slack with Q = G
  bool passive_by_structure = false;  ///< G > 0, A Hurwitz, D = D^T >= 0
  std::string note;
};
RelaxationVerdict relaxation_test(const StateSpaceSystem& sys, const Tolerances& tol = {});

struct HamiltonianStorage {
  StorageCertificate storage;
  double involution_residual = 0.0;       ///< ||(Omega^{-1} W)^2 - I||
  double anti_symplectic_residual = 0.0;  ///< ||T^T Omega T + Omega||, T = Omega^{-1} W
  int iterations = 0;
};
/// Cyclo-passive storage W with B^T W = C and -A^T W - W A >= 0 (D = 0),
/// averaged to the fixed point W = Omega W^{-1} Omega.
HamiltonianStorage io_ham_storage_W(const StateSpaceSystem& sys, const Certificate& omega, const Tolerances& tol = {});

/// Fills the passive and relaxation verdicts of a report.
void add_passivity_verdicts(VerdictReport& report, const StateSpaceSystem& sys, const Tolerances& tol = {});

}  // namespace symlti
