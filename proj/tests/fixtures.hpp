#pragma once

// Hand-checkable systems and seeded random generators shared by the tests.

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "symlti/lti.hpp"

namespace fixtures {

using symlti::Matrix;
using symlti::StateSpaceSystem;
using symlti::Vector;

/// True if f raises symlti::Error with the given code.
inline bool throws_code(symlti::ErrorCode code, const std::function<void()>& f) {
  try {
    f();
  } catch (const symlti::Error& e) {
    return e.code() == code;
  }
  return false;
}

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.begin()->size());
  Matrix m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index k = 0;
    for (double v : row) m(i, k++) = v;
    ++i;
  }
  return m;
}

/// x'' = u, y = position.
inline StateSpaceSystem point_mass() {
  return {mat({{0, 1}, {0, 0}}), mat({{0}, {1}}), mat({{1, 0}}), mat({{0}})};
}

/// 1/(s+1) + d.
inline StateSpaceSystem scalar_relaxation(double d = 0.0) { return {mat({{-1}}), mat({{1}}), mat({{1}}), mat({{d}})}; }

/// Undamped LC tank with velocity output.
inline StateSpaceSystem lc_oscillator() {
  return {mat({{0, 1}, {-1, 0}}), mat({{0}, {1}}), mat({{0, 1}}), mat({{0}})};
}

/// (q, p) pattern with F = 0, P = 1, S = 1, H = 1; K(s) = 1/(1 - s^2).
inline StateSpaceSystem nonneg_fixture() {
  return {mat({{0, -1}, {-1, 0}}), mat({{0}, {1}}), mat({{1, 0}}), mat({{0}})};
}

/// Harmonic oscillator with position output; time-reversible and IO-Hamiltonian.
inline StateSpaceSystem reversible_oscillator() {
  return {mat({{0, 1}, {-1, 0}}), mat({{0}, {1}}), mat({{1, 0}}), mat({{0}})};
}

/// Damped gyrator coupling; not reciprocal for any G.
inline StateSpaceSystem gyrator() {
  return {mat({{0, 1}, {-1, -1}}), Matrix::Identity(2, 2), Matrix::Identity(2, 2), Matrix::Zero(2, 2)};
}

inline StateSpaceSystem rc_pair() {
  return {mat({{-1, 0}, {0, -2}}), mat({{1}, {1}}), mat({{1, 1}}), mat({{0}})};
}

struct Rng {
  explicit Rng(unsigned seed) : gen(seed) {}
  std::mt19937 gen;
  std::normal_distribution<double> normal;

  Matrix randn(Eigen::Index r, Eigen::Index c) {
    Matrix m(r, c);
    for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = normal(gen);
    return m;
  }
  Vector randv(Eigen::Index n) { return randn(n, 1); }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  Matrix symmetric(Eigen::Index n) {
    const Matrix m = randn(n, n);
    return 0.5 * (m + m.transpose());
  }
  Matrix skew(Eigen::Index n) {
    const Matrix m = randn(n, n);
    return 0.5 * (m - m.transpose());
  }
  /// Random A shifted so its spectral abscissa is <= -0.5.
  Matrix hurwitz(Eigen::Index n) {
    Matrix a = randn(n, n);
    const double abscissa = a.eigenvalues().real().maxCoeff();
    a -= (abscissa + 0.5 + uniform(0.0, 1.0)) * Matrix::Identity(n, n);
    return a;
  }
  Matrix orthogonal(Eigen::Index n) {
    Eigen::HouseholderQR<Matrix> qr(randn(n, n));
    return qr.householderQ() * Matrix::Identity(n, n);
  }
  Matrix well_conditioned(Eigen::Index n) {
    Vector d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = uniform(0.7, 1.4);
    return orthogonal(n) * d.asDiagonal() * orthogonal(n);
  }
};

/// Taylor series with scaling and squaring; independent of Eigen's expm.
inline Matrix taylor_expm(const Matrix& a, double t) {
  const Matrix at = a * t;
  int squarings = 0;
  double nrm = at.lpNorm<Eigen::Infinity>();
  while (nrm > 0.25) {
    nrm *= 0.5;
    ++squarings;
  }
  const Matrix x = at / std::pow(2.0, squarings);
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  Matrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int k = 0; k < squarings; ++k) sum = sum * sum;
  return sum;
}

/// Triple (Omega, G, R) built from A = [[0, P], [-Q, 0]], B = [0; Bt], C = [Bt^T, 0]
/// in random coordinates.
struct ReversibleHamiltonian {
  StateSpaceSystem sys;
  Matrix omega, g, r;
};

inline ReversibleHamiltonian reversible_hamiltonian(Rng& rng, int p, int m) {
  const Matrix pp = rng.symmetric(p), qq = rng.symmetric(p), bt = rng.randn(p, m);
  const int n = 2 * p;
  Matrix a = Matrix::Zero(n, n), b = Matrix::Zero(n, m), c = Matrix::Zero(m, n);
  a.topRightCorner(p, p) = pp;
  a.bottomLeftCorner(p, p) = -qq;
  b.bottomRows(p) = bt;
  c.leftCols(p) = bt.transpose();
  Matrix j = Matrix::Zero(n, n);
  j.topRightCorner(p, p) = -Matrix::Identity(p, p);
  j.bottomLeftCorner(p, p) = Matrix::Identity(p, p);
  Vector r0 = Vector::Ones(n);
  r0.tail(p).setConstant(-1.0);
  const Matrix t = rng.well_conditioned(n), ti = t.inverse();
  ReversibleHamiltonian out;
  out.sys = StateSpaceSystem(ti * a * t, ti * b, c * t, Matrix::Zero(m, m));
  out.omega = t.transpose() * j * t;
  out.g = t.transpose() * (j * r0.asDiagonal()) * t;
  out.r = ti * r0.asDiagonal() * t;
  return out;
}

}  // namespace fixtures
