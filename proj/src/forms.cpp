#include "symlti/forms.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace symlti {

CMatrix realization_transfer(const Realization& r, Complex s) {
  const Eigen::Index n = r.A.rows();
  CMatrix k = r.D.cast<Complex>();
  if (n == 0) return k;
  const CMatrix resolvent = s * CMatrix::Identity(n, n) - r.A.cast<Complex>();
  Eigen::JacobiSVD<CMatrix> svd(resolvent);
  const Eigen::VectorXd sv = svd.singularValues();
  if (sv(n - 1) <= 1e-13 * std::max(1.0, sv(0))) {
    throw Error(ErrorCode::SingularResolvent, "s is an eigenvalue of the realization");
  }
  k += r.C.cast<Complex>() * resolvent.fullPivLu().solve(r.B.cast<Complex>());
  return k;
}

Realization as_realization(const StateSpaceSystem& sys) { return {sys.A, sys.B, sys.C, sys.D}; }

double transfer_deviation(const Realization& r1, const Realization& r2, const std::vector<Complex>& samples) {
  double worst = 0.0;
  for (const Complex& s : samples) {
    const CMatrix k1 = realization_transfer(r1, s);
    const CMatrix k2 = realization_transfer(r2, s);
    if (k1.rows() != k2.rows() || k1.cols() != k2.cols()) throw Error(ErrorCode::Dimension, "transfer shapes differ");
    worst = std::max(worst, (k1 - k2).norm() / (1.0 + k1.norm()));
  }
  return worst;
}

namespace {

Matrix eigenspace(const Matrix& involution, double sign) {
  const Eigen::Index n = involution.rows();
  Tolerances t;
  t.null_tol = 1e-8;
  Matrix basis = nullspace(involution - sign * Matrix::Identity(n, n), t);
  for (Eigen::Index k = 0; k < basis.cols(); ++k) {
    Eigen::Index pivot = 0;
    basis.col(k).cwiseAbs().maxCoeff(&pivot);
    if (basis(pivot, k) < 0.0) basis.col(k) *= -1.0;
  }
  return basis;
}

bool signature_is_identity(const StateSpaceSystem& sys) { return (sys.sigma.array() == 1.0).all(); }

Matrix canonical_symplectic(Eigen::Index half) {
  Matrix j = Matrix::Zero(2 * half, 2 * half);
  j.topRightCorner(half, half) = -Matrix::Identity(half, half);
  j.bottomLeftCorner(half, half) = Matrix::Identity(half, half);
  return j;
}

Matrix plus_pairing(Eigen::Index half) {
  Matrix w = Matrix::Zero(2 * half, 2 * half);
  w.topRightCorner(half, half) = Matrix::Identity(half, half);
  w.bottomLeftCorner(half, half) = Matrix::Identity(half, half);
  return w;
}

// Symplectic basis adapted to an involution that reverses Omega: q spans the
// +1 eigenspace, p the -1 eigenspace rescaled so that E^T Omega F = -I.
Matrix adapted_symplectic_basis(const Matrix& omega, const Matrix& involution) {
  const Eigen::Index n = omega.rows();
  const Matrix e = eigenspace(involution, 1.0);
  const Matrix f = eigenspace(involution, -1.0);
  if (e.cols() != f.cols() || e.cols() + f.cols() != n) {
    throw Error(ErrorCode::EigenspaceImbalance, "+1 and -1 eigenspaces differ in dimension")
        .with_family_dimension(static_cast<int>(e.cols() - f.cols()));
  }
  const Matrix pairing = -e.transpose() * omega * f;
  if (e.cols() > 0 && min_singular_value(pairing) <= 1e-10 * std::max(1.0, pairing.norm())) {
    throw Error(ErrorCode::EigenspaceImbalance, "eigenspaces are not symplectically paired");
  }
  Matrix t(n, n);
  t.leftCols(e.cols()) = e;
  t.rightCols(f.cols()) = f * pairing.inverse();
  return t;
}

}  // namespace

PseudoGradientForm to_pseudo_gradient(const StateSpaceSystem& sys, const Certificate& g, const Tolerances& tol) {
  if (g.kind != CertificateKind::Reciprocal) throw Error(ErrorCode::KindClash, "expected a reciprocal certificate");
  if (g.matrix.rows() != sys.n() || g.matrix.cols() != sys.n()) throw Error(ErrorCode::Dimension, "G must be n x n");
  PseudoGradientForm out;
  out.G = g.matrix;
  const Matrix p = -g.matrix * sys.A;
  const double asym = sys.n() == 0 ? 0.0 : asymmetry(p);
  if (asym > 1e-8 * (1.0 + p.norm())) {
    throw Error(ErrorCode::AsymmetricP, "P = -G A is not symmetric").with_residual(asym);
  }
  out.P = symmetric_part(p);
  out.C = sys.C;
  out.D = sys.D;
  out.sigma = sys.sigma;
  if (sys.n() > 0) {
    const Eigen::FullPivLU<Matrix> lu(out.G);
    out.reconstruction_residual = (sys.A + lu.solve(out.P)).norm() +
                                  (sys.B - lu.solve(sys.C.transpose() * sys.signature())).norm();
  }
  (void)tol;
  return out;
}

CompatibleCoordinates compatible_coordinates(const Matrix& g, const Matrix& q, const Tolerances& tol) {
  if (g.rows() != g.cols() || q.rows() != q.cols() || g.rows() != q.rows()) {
    throw Error(ErrorCode::Dimension, "G and Q must be square of one size");
  }
  const Eigen::Index n = q.rows();
  CompatibleCoordinates out;
  if (n == 0) {
    out.T = out.Q1 = out.Q2 = Matrix(0, 0);
    return out;
  }
  if (min_singular_value(q) <= tol.null_tol * std::max(1.0, q.norm())) {
    throw Error(ErrorCode::NotCompatible, "Q is singular");
  }
  const Eigen::FullPivLU<Matrix> lu(q);
  const double compat = (q - g * lu.solve(g)).norm() / (1.0 + q.norm());
  if (compat > tol.feas_tol) throw Error(ErrorCode::NotCompatible, "Q != G Q^{-1} G").with_residual(compat);
  const Matrix inv = lu.solve(g);
  const Matrix e = eigenspace(inv, 1.0);
  const Matrix f = eigenspace(inv, -1.0);
  if (e.cols() + f.cols() != n) throw Error(ErrorCode::NotCompatible, "Q^{-1} G is not a diagonalizable involution");
  out.T.resize(n, n);
  out.T << e, f;
  const Matrix qt = out.T.transpose() * q * out.T;
  const Matrix gt = out.T.transpose() * g * out.T;
  const Eigen::Index k = e.cols();
  out.Q1 = symmetric_part(qt.topLeftCorner(k, k));
  out.Q2 = symmetric_part(qt.bottomRightCorner(n - k, n - k));
  Matrix qpat = Matrix::Zero(n, n), gpat = Matrix::Zero(n, n);
  qpat.topLeftCorner(k, k) = out.Q1;
  qpat.bottomRightCorner(n - k, n - k) = out.Q2;
  gpat.topLeftCorner(k, k) = out.Q1;
  gpat.bottomRightCorner(n - k, n - k) = -out.Q2;
  out.residual = ((qt - qpat).norm() + (gt - gpat).norm()) / (1.0 + q.norm());
  return out;
}

PortHamiltonianForm to_port_hamiltonian(const StateSpaceSystem& sys, const Certificate& g, const Matrix& q,
                                        const Tolerances& tol) {
  if (!signature_is_identity(sys)) throw Error(ErrorCode::SignatureNotIdentity, "port-Hamiltonian form needs sigma = I");
  if (!verify_certificate(sys, g, tol).valid || g.kind != CertificateKind::Reciprocal) {
    throw Error(ErrorCode::NotReciprocal, "G does not certify reciprocity");
  }
  const Eigen::Index n = sys.n();
  const Eigen::Index m = sys.m();
  const CompatibleCoordinates cc = compatible_coordinates(g.matrix, q, tol);
  const Eigen::Index k = cc.Q1.rows();
  const Eigen::Index l = n - k;
  const Matrix pt = cc.T.transpose() * (-g.matrix * sys.A) * cc.T;
  const Matrix ct = sys.C * cc.T;

  PortHamiltonianForm out;
  out.Q1 = cc.Q1;
  out.Q2 = cc.Q2;
  out.P1 = symmetric_part(pt.topLeftCorner(k, k));
  out.P2 = symmetric_part(pt.bottomRightCorner(l, l));
  out.Pc = pt.topRightCorner(k, l);
  if (!is_psd(out.P1) || !is_psd(-out.P2)) {
    throw Error(ErrorCode::BlockDefinitenessFailed, "passivity needs P1 >= 0 and P2 <= 0");
  }
  const Matrix c2 = ct.rightCols(l);
  if (c2.norm() > 1e-8 * (1.0 + sys.C.norm())) {
    throw Error(ErrorCode::BlockDefinitenessFailed, "output map does not vanish on the second energy domain")
        .with_residual(c2.norm());
  }
  if ((sys.D - sys.D.transpose()).norm() > 1e-8 * (1.0 + sys.D.norm()) || !is_psd(sys.D)) {
    throw Error(ErrorCode::BlockDefinitenessFailed, "D must be symmetric positive semidefinite");
  }

  out.J = Matrix::Zero(n, n);
  out.J.topRightCorner(k, l) = -out.Pc;
  out.J.bottomLeftCorner(l, k) = out.Pc.transpose();
  out.R = Matrix::Zero(n, n);
  out.R.topLeftCorner(k, k) = out.P1;
  out.R.bottomRightCorner(l, l) = -out.P2;
  Matrix qdiag = Matrix::Zero(n, n);
  qdiag.topLeftCorner(k, k) = out.Q1;
  qdiag.bottomRightCorner(l, l) = out.Q2;
  out.hamiltonian = qdiag.inverse();
  out.T = qdiag * cc.T.inverse();

  Matrix bz = Matrix::Zero(n, m);
  bz.topRows(k) = ct.leftCols(k).transpose();
  Matrix cz = Matrix::Zero(m, n);
  cz.leftCols(k) = ct.leftCols(k);
  out.realization = {(out.J - out.R) * out.hamiltonian, bz, cz * out.hamiltonian, sys.D};
  out.transfer_residual =
      transfer_deviation(as_realization(sys), out.realization, frequency_samples(sys.A));
  return out;
}

PortHamiltonianForm relaxation_port_form(const StateSpaceSystem& sys, const Certificate& g, const Tolerances& tol) {
  if (!signature_is_identity(sys)) throw Error(ErrorCode::NotRelaxation, "relaxation systems have sigma = I");
  if (g.kind != CertificateKind::Reciprocal || !verify_certificate(sys, g, tol).valid) {
    throw Error(ErrorCode::NotRelaxation, "G does not certify reciprocity");
  }
  if (sys.n() > 0 && classify_definiteness(g.matrix) != Definiteness::PositiveDefinite) {
    throw Error(ErrorCode::NotRelaxation, "G is not positive definite");
  }
  const Eigen::Index n = sys.n();
  PortHamiltonianForm out;
  const Matrix p = symmetric_part(-g.matrix * sys.A);
  out.Q1 = g.matrix;
  out.Q2 = Matrix(0, 0);
  out.P1 = p;
  out.P2 = Matrix(0, 0);
  out.Pc = Matrix(n, 0);
  out.J = Matrix::Zero(n, n);
  out.R = p;
  out.hamiltonian = n == 0 ? Matrix(0, 0) : Matrix(g.matrix.inverse());
  out.T = g.matrix;
  out.realization = {-p * out.hamiltonian, sys.C.transpose(), sys.C * out.hamiltonian, sys.D};
  out.transfer_residual = transfer_deviation(as_realization(sys), out.realization, frequency_samples(sys.A));
  return out;
}

DerivativeOutputForm io_ham_to_port_ham(const StateSpaceSystem& sys, const Certificate& omega, const Tolerances& tol) {
  if (sys.D.norm() > tol.feas_tol * (1.0 + sys.C.norm())) {
    throw Error(ErrorCode::FeedthroughNonzero, "derivative-output form needs D = 0");
  }
  if (!signature_is_identity(sys)) throw Error(ErrorCode::SignatureNotIdentity, "derivative-output form needs sigma = I");
  if (omega.kind != CertificateKind::IOHamiltonian || !verify_certificate(sys, omega, tol).valid) {
    throw Error(ErrorCode::InvalidArgument, "Omega does not certify the IO-Hamiltonian property");
  }
  DerivativeOutputForm out;
  out.J = omega.matrix.inverse();
  out.Q = symmetric_part(omega.matrix * sys.A);
  const Matrix& c = sys.C;
  out.realization = {sys.A, -out.J * c.transpose(), c * out.J * out.Q, -c * out.J * c.transpose()};
  const Matrix qjq = out.Q * out.J * out.Q;
  const Matrix cjc = c * out.J * c.transpose();
  out.qjq_skewness = (qjq + qjq.transpose()).norm();
  out.cjc_skewness = (cjc + cjc.transpose()).norm();
  for (const Complex& s : frequency_samples(sys.A)) {
    const CMatrix expected = s * transfer(sys, s);
    const CMatrix got = realization_transfer(out.realization, s);
    out.transfer_residual = std::max(out.transfer_residual, (got - expected).norm() / (1.0 + expected.norm()));
  }
  return out;
}

namespace {

NormalForm assemble_normal_form(const StateSpaceSystem& sys, const Matrix& omega, const Matrix& t) {
  NormalForm nf;
  nf.T = t;
  nf.transformed = transform(sys, t);
  nf.Omega = t.transpose() * omega * t;
  return nf;
}

}  // namespace

NormalForm nonneg_normal_form(const StateSpaceSystem& sys, const Certificate& omega, const Matrix& w,
                              const Tolerances& tol) {
  const Eigen::Index n = sys.n();
  if (omega.kind != CertificateKind::IOHamiltonian || omega.matrix.rows() != n || w.rows() != n || w.cols() != n) {
    throw Error(ErrorCode::Dimension, "Omega and W must be n x n");
  }
  const Matrix inv = omega.matrix.fullPivLu().solve(w);
  NormalForm nf = assemble_normal_form(sys, omega.matrix, adapted_symplectic_basis(omega.matrix, inv));
  const Eigen::Index h = n / 2;
  nf.second = nf.T.transpose() * w * nf.T;
  nf.canonical_residual = (nf.Omega - canonical_symplectic(h)).norm() + (nf.second - plus_pairing(h)).norm();
  const StateSpaceSystem& ts = nf.transformed;
  nf.F = ts.A.topLeftCorner(h, h);
  nf.P = symmetric_part(-ts.A.topRightCorner(h, h));
  nf.S = symmetric_part(-ts.A.bottomLeftCorner(h, h));
  nf.H = ts.C.leftCols(h);
  nf.pattern_residual = (ts.A.bottomRightCorner(h, h) + nf.F.transpose()).norm() +
                        (ts.A.topRightCorner(h, h) + nf.P).norm() + (ts.A.bottomLeftCorner(h, h) + nf.S).norm() +
                        ts.B.topRows(h).norm() + ts.C.rightCols(h).norm() +
                        (ts.B.bottomRows(h) - nf.H.transpose()).norm();
  (void)tol;
  return nf;
}

NormalForm time_reversible_normal_form(const StateSpaceSystem& sys, const Certificate& omega, const Certificate& r,
                                       const Tolerances& tol) {
  const Eigen::Index n = sys.n();
  if (omega.matrix.rows() != n || r.matrix.rows() != n || r.matrix.cols() != n) {
    throw Error(ErrorCode::Dimension, "Omega and R must be n x n");
  }
  const Matrix& rm = r.matrix;
  const double anti = (rm.transpose() * omega.matrix * rm + omega.matrix).norm() / (1.0 + omega.matrix.norm());
  if (anti > tol.feas_tol) {
    throw Error(ErrorCode::NotAntiSymplectic, "R^T Omega R != -Omega").with_residual(anti);
  }
  NormalForm nf = assemble_normal_form(sys, omega.matrix, adapted_symplectic_basis(omega.matrix, rm));
  const Eigen::Index h = n / 2;
  nf.second = nf.T.transpose() * (omega.matrix * rm) * nf.T;
  nf.canonical_residual = (nf.Omega - canonical_symplectic(h)).norm() + (nf.second - plus_pairing(h)).norm();
  const StateSpaceSystem& ts = nf.transformed;
  nf.P = symmetric_part(ts.A.topRightCorner(h, h));
  nf.Qblock = symmetric_part(-ts.A.bottomLeftCorner(h, h));
  nf.Bt = ts.B.bottomRows(h);
  nf.pattern_residual = ts.A.topLeftCorner(h, h).norm() + ts.A.bottomRightCorner(h, h).norm() +
                        (ts.A.topRightCorner(h, h) - nf.P).norm() + (ts.A.bottomLeftCorner(h, h) + nf.Qblock).norm() +
                        ts.B.topRows(h).norm() + ts.C.rightCols(h).norm() +
                        (ts.C.leftCols(h) - nf.Bt.transpose()).norm();
  return nf;
}

FactorizationForm spectral_factorize(const Matrix& f, const Matrix& p, const Matrix& s, const Matrix& h,
                                     const Tolerances& tol) {
  const Eigen::Index k = f.rows();
  if (h.cols() != k) throw Error(ErrorCode::Dimension, "H must have as many columns as F");
  FactorizationForm out;
  out.F = f;
  out.P = p;
  out.S = s;
  out.H = h;
  out.X = solve_care(f, p, s, tol);
  out.riccati_residual = (f.transpose() * out.X + out.X * f - out.X * p * out.X + s).norm();
  out.P_factor = psd_sqrt(p);
  const Eigen::Index m = h.rows();
  out.M = {f - p * out.X, out.P_factor, h, Matrix::Zero(m, k)};

  Realization full;
  full.A.resize(2 * k, 2 * k);
  full.A << f, -p, -s, -f.transpose();
  full.B.resize(2 * k, m);
  full.B << Matrix::Zero(k, m), h.transpose();
  full.C.resize(m, 2 * k);
  full.C << h, Matrix::Zero(m, k);
  full.D = Matrix::Zero(m, m);

  out.nonnegative_on_axis = true;
  for (int i = 0; i < 20; ++i) {
    const double w = std::pow(10.0, -2.0 + 4.0 * i / 19.0);
    const Complex sw(0.0, w);
    const CMatrix kk = realization_transfer(full, sw);
    const CMatrix mm = realization_transfer(out.M, sw) * realization_transfer(out.M, -sw).transpose();
    out.identity_residual = std::max(out.identity_residual, (kk - mm).cwiseAbs().maxCoeff());
    const CMatrix herm = 0.5 * (kk + kk.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -1e-8 * (1.0 + kk.norm())) out.nonnegative_on_axis = false;
  }
  return out;
}

}  // namespace symlti
