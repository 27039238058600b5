#include "symlti/lti.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "symlti/matcore.hpp"

namespace symlti {

StateSpaceSystem::StateSpaceSystem(Matrix a, Matrix b, Matrix c, Matrix d, Vector s)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)), sigma(std::move(s)) {
  if (sigma.size() == 0) sigma = Vector::Ones(B.cols());
  validate();
}

void StateSpaceSystem::validate() const {
  if (A.rows() != A.cols()) throw Error(ErrorCode::Dimension, "A must be square");
  const Eigen::Index nn = A.rows();
  const Eigen::Index mm = B.cols();
  if (B.rows() != nn) throw Error(ErrorCode::Dimension, "B must have n rows");
  if (C.cols() != nn) throw Error(ErrorCode::Dimension, "C must have n columns");
  if (C.rows() != mm) throw Error(ErrorCode::Dimension, "input and output counts differ");
  if (D.rows() != mm || D.cols() != mm) throw Error(ErrorCode::Dimension, "D must be m x m");
  if (sigma.size() != mm) throw Error(ErrorCode::Dimension, "sigma must have m entries");
  for (Eigen::Index i = 0; i < mm; ++i) {
    if (sigma(i) != 1.0 && sigma(i) != -1.0) throw Error(ErrorCode::InvalidArgument, "sigma entries must be +1 or -1");
  }
  if (!A.allFinite() || !B.allFinite() || !C.allFinite() || !D.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "system matrices must be finite");
  }
}

CMatrix transfer(const StateSpaceSystem& sys, Complex s) {
  const Eigen::Index n = sys.n();
  CMatrix k = sys.D.cast<Complex>();
  if (n == 0) return k;
  const CMatrix resolvent = s * CMatrix::Identity(n, n) - sys.A.cast<Complex>();
  Eigen::JacobiSVD<CMatrix> svd(resolvent);
  const Eigen::VectorXd sv = svd.singularValues();
  if (sv(n - 1) <= 1e-13 * std::max(1.0, sv(0))) {
    throw Error(ErrorCode::SingularResolvent, "s is an eigenvalue of A").with_residual(sv(n - 1));
  }
  k += sys.C.cast<Complex>() * resolvent.fullPivLu().solve(sys.B.cast<Complex>());
  return k;
}

Matrix impulse_response(const StateSpaceSystem& sys, double t) {
  if (t < 0.0) throw Error(ErrorCode::NegativeTime, "impulse response requested at t < 0");
  if (sys.n() == 0) return Matrix::Zero(sys.m(), sys.m());
  return sys.C * matrix_exponential(sys.A, t) * sys.B;
}

Matrix controllability_matrix(const Matrix& a, const Matrix& b) {
  const Eigen::Index n = a.rows();
  Matrix k(n, n * b.cols());
  Matrix block = b;
  for (Eigen::Index i = 0; i < n; ++i) {
    k.middleCols(i * b.cols(), b.cols()) = block;
    block = a * block;
  }
  return k;
}

Matrix observability_matrix(const Matrix& a, const Matrix& c) {
  return controllability_matrix(a.transpose(), c.transpose()).transpose();
}

MinimalityReport minimality(const StateSpaceSystem& sys, const Tolerances& tol) {
  MinimalityReport r;
  const Eigen::Index n = sys.n();
  r.ctrb_rank = numerical_rank(controllability_matrix(sys.A, sys.B), tol);
  r.obsv_rank = numerical_rank(observability_matrix(sys.A, sys.C), tol);
  r.controllable = r.ctrb_rank == n;
  r.observable = r.obsv_rank == n;
  return r;
}

StateSpaceSystem dual_system(const StateSpaceSystem& sys) {
  return {sys.A.transpose(), sys.C.transpose(), sys.B.transpose(), sys.D.transpose(), sys.sigma};
}

StateSpaceSystem adjoint_system(const StateSpaceSystem& sys) {
  return {-sys.A.transpose(), -sys.C.transpose(), sys.B.transpose(), sys.D.transpose(), sys.sigma};
}

StateSpaceSystem transform(const StateSpaceSystem& sys, const Matrix& t) {
  if (t.rows() != sys.n() || t.cols() != sys.n()) throw Error(ErrorCode::Dimension, "T must be n x n");
  Eigen::FullPivLU<Matrix> lu(t);
  if (!lu.isInvertible()) throw Error(ErrorCode::InvalidArgument, "similarity transform is singular");
  return {lu.solve(sys.A * t), lu.solve(sys.B), sys.C * t, sys.D, sys.sigma};
}

Trajectory simulate(const StateSpaceSystem& sys, const Matrix& inputs, const Vector& x0, double h, double t0) {
  sys.validate();
  const Eigen::Index n = sys.n();
  const Eigen::Index m = sys.m();
  if (inputs.rows() != m) throw Error(ErrorCode::Dimension, "input samples must have m rows");
  if (x0.size() != n) throw Error(ErrorCode::Dimension, "x0 must have n entries");
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid spacing must be positive");
  if (n > 0) {
    const double norm_a = Eigen::JacobiSVD<Matrix>(sys.A).singularValues()(0);
    if (h * norm_a > 0.1) throw Error(ErrorCode::GridTooCoarse, "h exceeds 0.1 / ||A||");
  }
  const Eigen::Index steps = inputs.cols();
  Trajectory tr;
  tr.time = Vector::LinSpaced(steps, t0, t0 + h * static_cast<double>(steps - 1));
  if (steps == 1) tr.time(0) = t0;
  tr.inputs = inputs;
  tr.states.resize(n, steps);
  tr.outputs.resize(m, steps);
  if (steps == 0) return tr;

  Vector x = x0;
  const Matrix& a = sys.A;
  const Matrix& b = sys.B;
  for (Eigen::Index k = 0; k < steps; ++k) {
    tr.states.col(k) = x;
    if (k + 1 == steps) break;
    const Vector u0 = inputs.col(k);
    const Vector u1 = inputs.col(k + 1);
    const Vector um = 0.5 * (u0 + u1);
    const Vector k1 = a * x + b * u0;
    const Vector k2 = a * (x + 0.5 * h * k1) + b * um;
    const Vector k3 = a * (x + 0.5 * h * k2) + b * um;
    const Vector k4 = a * (x + h * k3) + b * u1;
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  tr.outputs = sys.C * tr.states + sys.D * inputs;
  return tr;
}

std::vector<Complex> frequency_samples(const Matrix& a) {
  std::vector<Complex> pts;
  for (int k = 0; k < 19; ++k) {
    const double w = std::pow(10.0, -2.0 + 4.0 * k / 18.0);
    pts.emplace_back(0.0, w);
  }
  pts.emplace_back(1.0, 1.0);
  const CVector lam = eigenvalues(a);
  std::vector<Complex> kept;
  for (const Complex& s : pts) {
    bool near = false;
    for (Eigen::Index i = 0; i < lam.size(); ++i) near = near || std::abs(s - lam(i)) <= 1e-6;
    if (!near) kept.push_back(s);
  }
  return kept;
}

}  // namespace symlti
