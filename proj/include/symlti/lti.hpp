#pragma once

// Continuous-time LTI systems  x' = Ax + Bu,  y = Cx + Du  with a signature
// vector pairing inputs and outputs.

#include <vector>

#include "symlti/types.hpp"

namespace symlti {

struct StateSpaceSystem {
  Matrix A;
  Matrix B;
  Matrix C;
  Matrix D;
  Vector sigma;  ///< entries exactly +1 or -1

  StateSpaceSystem() = default;
  /// sigma defaults to all +1 when empty.
  StateSpaceSystem(Matrix a, Matrix b, Matrix c, Matrix d, Vector sigma = Vector());

  Eigen::Index n() const { return A.rows(); }
  Eigen::Index m() const { return B.cols(); }
  Matrix signature() const { return sigma.asDiagonal(); }

  /// Throws Dimension / InvalidArgument if the invariants are broken.
  void validate() const;
};

struct MinimalityReport {
  bool controllable = false;
  bool observable = false;
  Eigen::Index ctrb_rank = 0;
  Eigen::Index obsv_rank = 0;
  bool minimal() const { return controllable && observable; }
};

/// Uniform-grid samples; column k of each matrix belongs to time(k).
struct Trajectory {
  Vector time;
  Matrix states;   ///< n x N
  Matrix inputs;   ///< m x N
  Matrix outputs;  ///< m x N
  double step() const { return time.size() > 1 ? time(1) - time(0) : 0.0; }
};

CMatrix transfer(const StateSpaceSystem& sys, Complex s);
/// Smooth part C e^{At} B of the impulse response; D is the separate atom.
Matrix impulse_response(const StateSpaceSystem& sys, double t);
Matrix controllability_matrix(const Matrix& a, const Matrix& b);
Matrix observability_matrix(const Matrix& a, const Matrix& c);
MinimalityReport minimality(const StateSpaceSystem& sys, const Tolerances& tol = {});
StateSpaceSystem dual_system(const StateSpaceSystem& sys);
StateSpaceSystem adjoint_system(const StateSpaceSystem& sys);
/// Similarity transform x = T z:  (T^{-1}AT, T^{-1}B, CT, D).
StateSpaceSystem transform(const StateSpaceSystem& sys, const Matrix& t);

/// Classical RK4 on the grid t0 + k h, k = 0..N-1, with inputs (m x N)
/// linearly interpolated between samples. Requires h <= 0.1 / ||A||_2.
Trajectory simulate(const StateSpaceSystem& sys, const Matrix& inputs, const Vector& x0, double h,
                    double t0 = 0.0);

/// Fixed sample set used by every frequency-domain residual: 19 log-spaced
/// points i*w, w in [1e-2, 1e2], plus s = 1 + i. Points within 1e-6 of an
/// eigenvalue of A are dropped.
std::vector<Complex> frequency_samples(const Matrix& a);

}  // namespace symlti
