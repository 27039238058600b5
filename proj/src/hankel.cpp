#include "symlti/hankel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

namespace symlti {

Gramians compute_gramians(const StateSpaceSystem& sys, const Tolerances& tol) {
  sys.validate();
  if (!is_hurwitz(sys.A, tol)) throw Error(ErrorCode::NotHurwitz, "Gramians need a Hurwitz A");
  Gramians g;
  g.ctrb = solve_lyapunov(sys.A, sys.B * sys.B.transpose(), tol);
  g.obsv = solve_lyapunov(sys.A.transpose(), sys.C.transpose() * sys.C, tol);
  g.cross = solve_sylvester(sys.A, sys.A, -sys.B * sys.signature() * sys.C, tol);
  return g;
}

HankelSpectralData hankel_spectrum(const StateSpaceSystem& sys, const Certificate& g, const Tolerances& tol) {
  if (g.kind != CertificateKind::Reciprocal || !verify_certificate(sys, g, tol).valid) {
    throw Error(ErrorCode::NotReciprocal, "Hankel spectrum needs a valid reciprocity certificate");
  }
  HankelSpectralData d;
  d.gramians = compute_gramians(sys, tol);
  d.G = g.matrix;
  d.A = sys.A;
  d.B = sys.B;
  const Eigen::Index n = sys.n();
  const Matrix& c = d.gramians.ctrb;
  const Matrix& z = d.gramians.cross;
  if (n == 0) {
    d.eigenvalues = Vector(0);
    d.eigvecs = Matrix(0, 0);
    return d;
  }

  const Matrix root = psd_sqrt(c);
  const SymmetricEigen se = symmetric_eig(symmetric_part(root * d.G * root), Tolerances{tol.feas_tol, tol.null_tol, 1e-6});
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    const double ai = std::abs(se.values(i)), aj = std::abs(se.values(j));
    if (ai != aj) return ai > aj;
    return se.values(i) > se.values(j);
  });
  d.eigenvalues.resize(n);
  d.eigvecs.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    d.eigenvalues(k) = se.values(src);
    d.eigvecs.col(k) = root * se.vectors.col(src);
  }

  const double zn = 1.0 + z.norm();
  d.identity_zcg = (z - c * d.G).norm() / zn;
  d.identity_zgo = (z - d.G.fullPivLu().solve(d.gramians.obsv)).norm() / zn;
  d.identity_z2 = (z * z - c * d.gramians.obsv).norm() / (1.0 + z.squaredNorm());

  const CVector lz = eigenvalues(z);
  std::vector<double> re_z, re_l(d.eigenvalues.data(), d.eigenvalues.data() + n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d.imag_residual = std::max(d.imag_residual, std::abs(lz(i).imag()));
    re_z.push_back(lz(i).real());
  }
  std::sort(re_z.begin(), re_z.end());
  std::sort(re_l.begin(), re_l.end());
  for (std::size_t i = 0; i < re_z.size(); ++i) {
    d.cross_spectrum_residual = std::max(d.cross_spectrum_residual, std::abs(re_z[i] - re_l[i]));
  }
  return d;
}

namespace {

Matrix ctrb_inverse(const HankelSpectralData& data, const Tolerances& tol) {
  const Matrix& c = data.gramians.ctrb;
  if (c.rows() > 0 && min_eigenvalue(c) <= tol.null_tol * std::max(1.0, c.norm()) * 1e2) {
    throw Error(ErrorCode::SingularGramian, "controllability Gramian is singular");
  }
  return c.llt().solve(Matrix::Identity(c.rows(), c.cols()));
}

}  // namespace

Eigenfunctions eigenfunctions(const HankelSpectralData& data, const Vector& grid, const Tolerances& tol) {
  const Matrix cinv = ctrb_inverse(data, tol);
  Eigenfunctions ef;
  ef.grid = grid;
  const Eigen::Index n = data.A.rows();
  ef.gram = data.eigvecs.transpose() * cinv * data.eigvecs;
  const Matrix coeff = cinv * data.eigvecs;  // C^{-1} x_i as columns
  ef.samples.assign(static_cast<std::size_t>(n), Matrix(data.B.cols(), grid.size()));
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    const Matrix phi = data.B.transpose() * matrix_exponential(data.A.transpose(), grid(k)) * coeff;  // m x n
    for (Eigen::Index i = 0; i < n; ++i) ef.samples[static_cast<std::size_t>(i)].col(k) = phi.col(i);
  }
  return ef;
}

double mercer_residual(const StateSpaceSystem& sys, const HankelSpectralData& data, const Vector& grid, int terms,
                       const Tolerances& tol) {
  const Eigen::Index n = sys.n();
  const Eigen::Index used = terms < 0 ? n : std::min<Eigen::Index>(terms, n);
  const Eigenfunctions ef = eigenfunctions(data, grid, tol);
  const Eigen::Index npts = grid.size();
  std::vector<Matrix> expm(static_cast<std::size_t>(npts));
  for (Eigen::Index k = 0; k < npts; ++k) expm[static_cast<std::size_t>(k)] = matrix_exponential(sys.A, grid(k));
  const Matrix sc = sys.signature() * sys.C;
  double worst = 0.0;
  for (Eigen::Index a = 0; a < npts; ++a) {
    const Matrix left = sc * expm[static_cast<std::size_t>(a)];
    for (Eigen::Index b = 0; b < npts; ++b) {
      Matrix kernel = left * expm[static_cast<std::size_t>(b)] * sys.B;
      for (Eigen::Index i = 0; i < used; ++i) {
        const Matrix& phi = ef.samples[static_cast<std::size_t>(i)];
        kernel -= data.eigenvalues(i) * phi.col(a) * phi.col(b).transpose();
      }
      worst = std::max(worst, kernel.cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

MemoryFunctionalSample memory_functional(const StateSpaceSystem& sys, const Certificate& g, const Matrix& past_input,
                                         double h, const Tolerances& tol) {
  sys.validate();
  if (!is_hurwitz(sys.A, tol)) throw Error(ErrorCode::NotHurwitz, "memory functional needs a Hurwitz A");
  if (past_input.rows() != sys.m() || past_input.cols() < 2) {
    throw Error(ErrorCode::Dimension, "past input must be m x (N + 1) with N >= 1");
  }
  const Eigen::Index n = sys.n();
  const Eigen::Index steps = past_input.cols() - 1;
  MemoryFunctionalSample out;
  out.past_input = past_input;

  // Separable quadrature of 1/2 int int u^(t)^T sigma C e^{A(t + tau)} B u^(tau),
  // u^(t) = u_p(-t), using e^{A t_k} = (e^{A h})^k.
  const Matrix step = matrix_exponential(sys.A, h);
  Matrix e = Matrix::Identity(n, n);
  Vector left = Vector::Zero(n), right = Vector::Zero(n);
  const Matrix sc = sys.signature() * sys.C;
  for (Eigen::Index k = 0; k <= steps; ++k) {
    const double w = (k == 0 || k == steps) ? 0.5 * h : h;
    const Vector u = past_input.col(steps - k);
    left += w * (e.transpose() * (sc.transpose() * u));
    right += w * (e * (sys.B * u));
    e = e * step;
  }
  out.value = 0.5 * left.dot(right);

  const double horizon = h * static_cast<double>(steps);
  const Trajectory tr = simulate(sys, past_input, Vector::Zero(n), h, -horizon);
  out.x0 = tr.states.col(steps);
  out.state_value = 0.5 * out.x0.dot(g.matrix * out.x0);
  return out;
}

TimeGrid default_grid(const Matrix& a, Eigen::Index max_points) {
  TimeGrid grid;
  const double abscissa = a.rows() == 0 ? -1.0 : spectral_abscissa(a);
  grid.horizon = abscissa < 0.0 ? std::min(100.0, 15.0 / std::abs(abscissa)) : 100.0;
  grid.points = std::max<Eigen::Index>(2, max_points);
  grid.step = grid.horizon / static_cast<double>(grid.points - 1);
  return grid;
}

}  // namespace symlti
