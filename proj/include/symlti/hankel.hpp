#pragma once

// Gramians, cross-Gramian and the spectral decomposition of the
// signature-weighted Hankel operator of a reciprocal system.

#include <vector>

#include "symlti/certify.hpp"

namespace symlti {

struct Gramians {
  Matrix ctrb;   ///< A C + C A^T + B B^T = 0
  Matrix obsv;   ///< A^T O + O A + C^T C = 0
  Matrix cross;  ///< A Z + Z A + B sigma C = 0
};
Gramians compute_gramians(const StateSpaceSystem& sys, const Tolerances& tol = {});

struct HankelSpectralData {
  Gramians gramians;
  Matrix G;
  Vector eigenvalues;  ///< ordered by decreasing |lambda|
  Matrix eigvecs;      ///< x_i as columns, scaled so x_i^T C^{-1} x_j = delta_ij
  Matrix A, B;         ///< copies needed to sample eigenfunctions
  double imag_residual = 0.0;  ///< largest |Im| among eigenvalues of Z
  double identity_zcg = 0.0;   ///< ||Z - C G|| / (1 + ||Z||)
  double identity_zgo = 0.0;   ///< ||Z - G^{-1} O|| / (1 + ||Z||)
  double identity_z2 = 0.0;    ///< ||Z^2 - C O|| / (1 + ||Z||^2)
  double cross_spectrum_residual = 0.0;  ///< eig(Z) vs eigenvalues
};
HankelSpectralData hankel_spectrum(const StateSpaceSystem& sys, const Certificate& g, const Tolerances& tol = {});

struct Eigenfunctions {
  Vector grid;
  std::vector<Matrix> samples;  ///< samples[i] is m x N, column k = phi_i(grid(k))
  Matrix gram;                  ///< x_i^T C^{-1} x_j in closed form
};
Eigenfunctions eigenfunctions(const HankelSpectralData& data, const Vector& grid, const Tolerances& tol = {});

/// max over grid x grid of |sigma C e^{A(t+tau)} B - sum_{i<terms} lambda_i phi_i(t) phi_i(tau)^T|.
/// terms < 0 uses all n terms.
double mercer_residual(const StateSpaceSystem& sys, const HankelSpectralData& data, const Vector& grid,
                       int terms = -1, const Tolerances& tol = {});

struct MemoryFunctionalSample {
  Matrix past_input;  ///< m x (N + 1), columns at tau = -T, -T + h, ..., 0
  double value = 0.0;        ///< quadrature of the double integral
  double state_value = 0.0;  ///< 1/2 x(0)^T G x(0) from simulation
  Vector x0;
};
MemoryFunctionalSample memory_functional(const StateSpaceSystem& sys, const Certificate& g, const Matrix& past_input,
                                         double h, const Tolerances& tol = {});

struct TimeGrid {
  double horizon = 0.0;
  double step = 0.0;
  Eigen::Index points = 0;
};
/// T = 15 / |Re lambda_max(A)| capped at 100; h gives at most max_points points.
TimeGrid default_grid(const Matrix& a, Eigen::Index max_points = 20001);

}  // namespace symlti
