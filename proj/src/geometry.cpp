#include "symlti/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "symlti/simd/kernels.hpp"

namespace symlti {

// ---------------------------------------------------------------- subspaces

LinearSubspace LinearSubspace::span(const Matrix& columns, const Tolerances& tol) {
  if (columns.rows() % 2 != 0) throw Error(ErrorCode::Dimension, "ambient dimension must be even");
  const Eigen::Index half = columns.rows() / 2;
  if (columns.cols() == 0 || columns.norm() == 0.0) return LinearSubspace(half, Matrix(columns.rows(), 0));
  Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeThinU);
  const Vector& sv = svd.singularValues();
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > tol.null_tol * sv(0)) ++r;
  return LinearSubspace(half, svd.matrixU().leftCols(r));
}

LinearSubspace LinearSubspace::zero(Eigen::Index n) { return LinearSubspace(n, Matrix(2 * n, 0)); }

LinearSubspace LinearSubspace::whole(Eigen::Index n) { return LinearSubspace(n, Matrix::Identity(2 * n, 2 * n)); }

LinearSubspace LinearSubspace::graph(const Matrix& s) {
  if (s.rows() != s.cols()) throw Error(ErrorCode::Dimension, "graph map must be square");
  Matrix cols(2 * s.rows(), s.cols());
  cols << Matrix::Identity(s.rows(), s.cols()), s;
  return span(cols);
}

LinearSubspace LinearSubspace::cograph(const Matrix& s) {
  if (s.rows() != s.cols()) throw Error(ErrorCode::Dimension, "graph map must be square");
  Matrix cols(2 * s.rows(), s.cols());
  cols << s, Matrix::Identity(s.rows(), s.cols());
  return span(cols);
}

LinearSubspace LinearSubspace::product_with_annihilator(const Matrix& k_columns, const Tolerances& tol) {
  const Eigen::Index n = k_columns.rows();
  Matrix k = Matrix(n, 0);
  if (k_columns.cols() > 0 && k_columns.norm() > 0.0) {
    Eigen::JacobiSVD<Matrix> svd(k_columns, Eigen::ComputeThinU);
    Eigen::Index r = 0;
    while (r < svd.singularValues().size() && svd.singularValues()(r) > tol.null_tol * svd.singularValues()(0)) ++r;
    k = svd.matrixU().leftCols(r);
  }
  const Matrix kperp = k.cols() == 0 ? Matrix(Matrix::Identity(n, n)) : nullspace(k.transpose(), tol);
  Matrix cols = Matrix::Zero(2 * n, k.cols() + kperp.cols());
  cols.topLeftCorner(n, k.cols()) = k;
  cols.bottomRightCorner(n, kperp.cols()) = kperp;
  return span(cols, tol);
}

Matrix pairing_matrix(Eigen::Index n, PairingForm form) {
  Matrix m = Matrix::Zero(2 * n, 2 * n);
  m.topRightCorner(n, n) = (form == PairingForm::Symplectic ? -1.0 : 1.0) * Matrix::Identity(n, n);
  m.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
  return m;
}

double pairing(const Vector& a, const Vector& b, PairingForm form) {
  if (a.size() != b.size() || a.size() % 2 != 0) throw Error(ErrorCode::Dimension, "pairing of mismatched vectors");
  return a.dot(pairing_matrix(a.size() / 2, form) * b);
}

LinearSubspace orthogonal_companion(const LinearSubspace& s, PairingForm form, const Tolerances& tol) {
  const Eigen::Index n = s.half();
  if (s.dim() == 0) return LinearSubspace::whole(n);
  const Matrix images = pairing_matrix(n, form) * s.basis();
  return LinearSubspace::span(nullspace(images.transpose(), tol), tol);
}

double subspace_distance(const LinearSubspace& a, const LinearSubspace& b) {
  if (a.dim() != b.dim() || a.half() != b.half()) return 1.0;
  if (a.dim() == 0) return 0.0;
  const Matrix residual = b.basis() - a.basis() * (a.basis().transpose() * b.basis());
  return Eigen::JacobiSVD<Matrix>(residual).singularValues()(0);
}

bool same_subspace(const LinearSubspace& a, const LinearSubspace& b, double tol) {
  return subspace_distance(a, b) <= tol;
}

bool is_lagrangian(const LinearSubspace& s, const Tolerances& tol) {
  return s.dim() == s.half() && same_subspace(orthogonal_companion(s, PairingForm::Symplectic, tol), s);
}

bool is_dirac(const LinearSubspace& s, const Tolerances& tol) {
  return s.dim() == s.half() && same_subspace(orthogonal_companion(s, PairingForm::Plus, tol), s);
}

SeparabilityResult separable_test(const LinearSubspace& s, const Tolerances& tol) {
  if (!is_dirac(s, tol)) throw Error(ErrorCode::NotDirac, "separability is defined for Dirac structures");
  SeparabilityResult out;
  const Matrix f = s.f_part();
  const Matrix e = s.e_part();
  const Matrix cross = e.transpose() * f;
  out.cross_pairing = cross.size() == 0 ? 0.0 : cross.cwiseAbs().maxCoeff();
  out.separable = out.cross_pairing <= 1e-9;
  Matrix k(s.half(), 0);
  if (f.size() > 0 && f.norm() > 0.0) {
    Eigen::JacobiSVD<Matrix> svd(f, Eigen::ComputeThinU);
    Eigen::Index r = 0;
    while (r < svd.singularValues().size() && svd.singularValues()(r) > 1e-9 * svd.singularValues()(0)) ++r;
    k = svd.matrixU().leftCols(r);
  }
  out.K = k;
  out.product_distance = subspace_distance(s, LinearSubspace::product_with_annihilator(k, tol));
  return out;
}

HybridRepresentation hybrid_representation(const LinearSubspace& s, const Tolerances& tol) {
  if (!is_lagrangian(s, tol)) throw Error(ErrorCode::NotLagrangian, "hybrid representation needs a Lagrangian subspace");
  const Eigen::Index n = s.half();
  const Matrix f = s.f_part();
  const Matrix e = s.e_part();
  HybridRepresentation out;

  // Rows of f indexed by I1 must form a basis of its row space; pivoted QR on
  // f^T picks the best conditioned such set.
  std::vector<bool> in_first(static_cast<std::size_t>(n), false);
  const Eigen::Index r = numerical_rank(f, Tolerances{tol.feas_tol, 1e-9, tol.sym_tol});
  if (r > 0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(f.transpose());
    for (Eigen::Index k = 0; k < r; ++k) in_first[static_cast<std::size_t>(qr.colsPermutation().indices()(k))] = true;
  }
  for (Eigen::Index i = 0; i < n; ++i) (in_first[static_cast<std::size_t>(i)] ? out.i1 : out.i2).push_back(i);

  const Eigen::Index n1 = static_cast<Eigen::Index>(out.i1.size());
  Matrix param(n, n), image(n, n);
  for (Eigen::Index k = 0; k < n1; ++k) {
    param.row(k) = f.row(out.i1[static_cast<std::size_t>(k)]);
    image.row(k) = e.row(out.i1[static_cast<std::size_t>(k)]);
  }
  for (Eigen::Index k = n1; k < n; ++k) {
    param.row(k) = e.row(out.i2[static_cast<std::size_t>(k - n1)]);
    image.row(k) = f.row(out.i2[static_cast<std::size_t>(k - n1)]);
  }
  // S param = image  =>  S = image param^{-1}
  out.S = param.transpose().fullPivLu().solve(image.transpose()).transpose();
  out.signature = Vector::Ones(n);
  out.signature.tail(n - n1).setConstant(-1.0);
  const Matrix sig = out.signature.asDiagonal();
  out.signature_residual = (sig * out.S - out.S.transpose() * sig).norm();

  Matrix lifted(2 * n, n);
  for (Eigen::Index k = 0; k < n; ++k) lifted.col(k) = hybrid_point(out, Vector::Unit(n, k));
  out.graph_residual = subspace_distance(s, LinearSubspace::span(lifted, tol));
  return out;
}

Vector hybrid_point(const HybridRepresentation& h, const Vector& parameter) {
  const Eigen::Index n = h.S.rows();
  const Eigen::Index n1 = static_cast<Eigen::Index>(h.i1.size());
  if (parameter.size() != n) throw Error(ErrorCode::Dimension, "parameter length differs from n");
  const Vector q = h.S * parameter;
  Vector v(2 * n);
  for (Eigen::Index k = 0; k < n1; ++k) {
    const Eigen::Index i = h.i1[static_cast<std::size_t>(k)];
    v(i) = parameter(k);
    v(n + i) = q(k);
  }
  for (Eigen::Index k = n1; k < n; ++k) {
    const Eigen::Index i = h.i2[static_cast<std::size_t>(k - n1)];
    v(n + i) = parameter(k);
    v(i) = q(k);
  }
  return v;
}

double generating_function(const HybridRepresentation& h, const Vector& parameter) {
  return 0.5 * parameter.dot(h.signature.asDiagonal() * (h.S * parameter));
}

KernelRepresentation kernel_representation(const LinearSubspace& s, const Tolerances& tol) {
  if (!is_dirac(s, tol)) throw Error(ErrorCode::NotDirac, "kernel representation needs a Dirac structure");
  KernelRepresentation out;
  // The Euclidean complement of a Dirac structure is its image under the
  // plus form, so [F E] = basis^T Pi.
  out.F = s.e_part().transpose();
  out.E = s.f_part().transpose();
  out.skew_residual = (out.F * out.E.transpose() + out.E * out.F.transpose()).norm();
  Matrix fe(out.F.rows(), 2 * s.half());
  fe << out.F, out.E;
  out.kernel_residual = (fe * s.basis()).norm();
  out.rank = numerical_rank(fe, tol);
  return out;
}

// ------------------------------------------------------- discretized Hankel

namespace {

double frobenius_trace_product(const Matrix& a, const Matrix& b) { return (a.array() * b.transpose().array()).sum(); }

// Indices of the n eigenvalues of largest modulus, in decreasing order.
Vector leading_real_parts(const CVector& ev, Eigen::Index count, double& imag) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index i = 0; i < ev.size(); ++i) idx[static_cast<std::size_t>(i)] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double ma = std::abs(ev(a)), mb = std::abs(ev(b));
    if (ma != mb) return ma > mb;
    return ev(a).real() > ev(b).real();
  });
  const Eigen::Index k = std::min<Eigen::Index>(count, ev.size());
  Vector out(k);
  imag = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    out(i) = ev(idx[static_cast<std::size_t>(i)]).real();
    imag = std::max(imag, std::abs(ev(idx[static_cast<std::size_t>(i)]).imag()));
  }
  return out;
}

}  // namespace

DiscretizedHankelReport discretized_hankel_check(const StateSpaceSystem& sys, const std::optional<Certificate>& g,
                                                 const HankelGrid& grid, Eigen::Index explicit_limit,
                                                 const Tolerances& tol) {
  sys.validate();
  if (g && (g->kind != CertificateKind::Reciprocal || !verify_certificate(sys, *g, tol).valid)) {
    throw Error(ErrorCode::NotReciprocal, "supplied reciprocity certificate does not verify");
  }
  if (!is_hurwitz(sys.A, tol)) throw Error(ErrorCode::NotHurwitz, "Hankel operator needs a Hurwitz A");
  if (!(grid.horizon > 0.0) || !(grid.step > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid needs T, h > 0");

  DiscretizedHankelReport out;
  const Eigen::Index n = sys.n(), m = sys.m();
  out.cells = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::llround(grid.horizon / grid.step)));
  out.step = grid.horizon / static_cast<double>(out.cells);
  out.horizon = grid.horizon;
  const double h = out.step;
  const Eigen::Index rows = out.cells * m;

  // H_d = h L R with block row j of L = sigma C e^{A t_j} and block column j
  // of R = e^{A t_j} B at midpoints t_j. Rt stores R^T.
  Matrix L(rows, n), Rt(rows, n);
  const Matrix sc = sys.signature() * sys.C;
  const Matrix step = matrix_exponential(sys.A, h);
  Matrix e = matrix_exponential(sys.A, 0.5 * h);
  for (Eigen::Index j = 0; j < out.cells; ++j) {
    L.middleRows(j * m, m) = sc * e;
    Rt.middleRows(j * m, m) = (e * sys.B).transpose();
    e = e * step;
  }

  const Matrix rl = h * simd::gemm_tn(Rt, L);    // h R L, n x n
  const Matrix ltl = simd::gemm_tn(L, L);
  const Matrix rrt = simd::gemm_tn(Rt, Rt);
  const double norm2 = h * h * frobenius_trace_product(ltl, rrt);
  const double trace_sq = frobenius_trace_product(rl, rl);
  const double asym2 = std::max(0.0, 2.0 * norm2 - 2.0 * trace_sq);
  out.symmetry_residual = norm2 > 0.0 ? std::sqrt(asym2 / norm2) : 0.0;
  out.eigenvalues = leading_real_parts(n > 0 ? eigenvalues(rl) : CVector(0), n, out.eigen_imag);

  // Symplectic form on pairs (u, H u) drawn from a fixed seed.
  if (norm2 > 0.0) {
    std::mt19937 gen(1);
    std::normal_distribution<double> dist;
    for (int pair = 0; pair < 8; ++pair) {
      Vector ua(rows), ub(rows);
      for (Eigen::Index i = 0; i < rows; ++i) ua(i) = dist(gen);
      for (Eigen::Index i = 0; i < rows; ++i) ub(i) = dist(gen);
      const Vector ha = h * (L * (Rt.transpose() * ua));
      const Vector hb = h * (L * (Rt.transpose() * ub));
      const double form = h * (simd::dot(ha, ub) - simd::dot(hb, ua));
      const double scale = h * std::sqrt(norm2) * ua.norm() * ub.norm();
      out.form_residual = std::max(out.form_residual, std::abs(form) / scale);
    }
  }

  if (rows <= explicit_limit) {
    out.explicit_matrix = true;
    out.matrix = h * L * Rt.transpose();
    const double fro = out.matrix.norm();
    out.symmetry_residual = fro > 0.0 ? asymmetry(out.matrix) / fro : 0.0;
    out.eigenvalues = leading_real_parts(rows > 0 ? eigenvalues(out.matrix) : CVector(0), n, out.eigen_imag);
  }
  out.symmetric = out.symmetry_residual <= 1e-6;
  return out;
}

// ------------------------------------------------------ constrained Volterra

namespace {

struct VolterraGrid {
  double step = 0.0;
  Matrix kernel;
  Matrix constraint;
  Matrix expm;   // e^{A h}
  Matrix phi;    // int_0^h e^{As} ds
  Matrix psi;    // int_0^h int_0^s e^{Aq} dq ds
};

VolterraGrid build_volterra(const StateSpaceSystem& sys, const Certificate& omega, const VolterraWindow& w,
                            const Tolerances& tol) {
  sys.validate();
  if (sys.D.size() > 0 && sys.D.cwiseAbs().maxCoeff() != 0.0) {
    throw Error(ErrorCode::FeedthroughNonzero, "Volterra kernel assumes D = 0");
  }
  if (omega.kind != CertificateKind::IOHamiltonian || !verify_certificate(sys, omega, tol).valid) {
    throw Error(ErrorCode::InvalidArgument, "Volterra check needs a valid IO-Hamiltonian certificate");
  }
  if (!(w.beta > w.alpha) || w.cells < 1) throw Error(ErrorCode::InvalidArgument, "window needs beta > alpha, cells >= 1");
  const Eigen::Index n = sys.n(), m = sys.m(), cells = w.cells;
  VolterraGrid g;
  g.step = (w.beta - w.alpha) / static_cast<double>(cells);
  const double h = g.step;
  std::tie(g.expm, g.phi) = exponential_and_integral(sys.A, h);
  const auto [expm_neg, phi_neg] = exponential_and_integral(-sys.A, h);

  Matrix big = Matrix::Zero(3 * n, 3 * n);
  big.topLeftCorner(n, n) = sys.A;
  big.block(0, n, n, n) = Matrix::Identity(n, n);
  big.block(n, 2 * n, n, n) = Matrix::Identity(n, n);
  g.psi = matrix_exponential(big, h).topRightCorner(n, n);

  const Matrix sc = sys.signature() * sys.C;
  std::vector<Matrix> blocks(static_cast<std::size_t>(cells));
  blocks[0] = sc * g.psi * sys.B;
  const Matrix pair = g.phi * phi_neg * sys.B;
  Matrix e = g.expm;
  for (Eigen::Index k = 1; k < cells; ++k) {
    blocks[static_cast<std::size_t>(k)] = sc * e * pair;
    e = e * g.expm;
  }
  g.kernel = Matrix::Zero(cells * m, cells * m);
  for (Eigen::Index i = 0; i < cells; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) g.kernel.block(i * m, j * m, m, m) = blocks[static_cast<std::size_t>(i - j)];
  }

  g.constraint.resize(n, cells * m);
  Matrix en = matrix_exponential(-sys.A, w.alpha);
  const Matrix cell_b = phi_neg * sys.B;
  for (Eigen::Index j = 0; j < cells; ++j) {
    g.constraint.middleCols(j * m, m) = en * cell_b;
    en = en * expm_neg;
  }
  return g;
}

}  // namespace

VolterraReport constrained_volterra_check(const StateSpaceSystem& sys, const Certificate& omega,
                                          const VolterraWindow& window, bool constrained, const Tolerances& tol) {
  const VolterraGrid g = build_volterra(sys, omega, window, tol);
  VolterraReport out;
  out.cells = window.cells;
  out.step = g.step;
  out.kernel = g.kernel;
  out.constraint = g.constraint;
  const Eigen::Index dim = g.kernel.rows();
  out.basis = constrained ? nullspace(g.constraint, tol) : Matrix(Matrix::Identity(dim, dim));

  const Matrix reduced = out.basis.transpose() * g.kernel * out.basis;
  const double scale = reduced.norm();
  out.symmetry_residual = scale > 0.0 ? asymmetry(reduced) / scale : 0.0;
  out.symmetric = out.symmetry_residual <= 1e-6;

  const Matrix sym = symmetric_part(reduced);
  out.definiteness = classify_definiteness(sym, 1e-8);
  if (sym.rows() == 0) return out;
  const SymmetricEigen se = symmetric_eig(sym);
  out.min_eigenvalue = se.values(0);
  out.max_eigenvalue = se.values(se.values.size() - 1);
  const double thresh = 1e-8 * std::max(std::abs(out.min_eigenvalue), std::abs(out.max_eigenvalue));
  out.psd = out.min_eigenvalue >= -thresh;
  if (out.min_eigenvalue < -thresh) out.negative_witness = out.basis * se.vectors.col(0);
  if (out.max_eigenvalue > thresh) out.positive_witness = out.basis * se.vectors.col(se.values.size() - 1);
  return out;
}

FunctionalValue generating_functional_value(const StateSpaceSystem& sys, const Certificate& omega, const Vector& u,
                                            const VolterraWindow& window, const Tolerances& tol) {
  const VolterraGrid g = build_volterra(sys, omega, window, tol);
  const Eigen::Index n = sys.n(), m = sys.m();
  if (u.size() != g.kernel.rows()) throw Error(ErrorCode::Dimension, "input length must be cells * m");
  FunctionalValue out;
  const double mn = g.constraint.size() == 0 ? 0.0 : Eigen::JacobiSVD<Matrix>(g.constraint).singularValues()(0);
  const double cres = (g.constraint * u).norm();
  out.constraint_residual = cres / (1.0 + mn * u.norm());
  if (cres > tol.feas_tol * (mn * u.norm()) && cres > 1e-14) {
    throw Error(ErrorCode::ConstraintViolated, "input violates the moment constraints").with_residual(cres);
  }

  // Exact propagation of the piecewise-constant input from x(alpha) = 0.
  const Matrix sc = sys.signature() * sys.C;
  Vector x = Vector::Zero(n);
  double acc = 0.0;
  for (Eigen::Index k = 0; k < window.cells; ++k) {
    const Vector uk = u.segment(k * m, m);
    const Vector cell_output = sc * (g.phi * x + g.psi * (sys.B * uk));
    acc += uk.dot(cell_output);
    x = g.expm * x + g.phi * (sys.B * uk);
  }
  out.value = 0.5 * acc;
  out.kernel_value = 0.5 * u.dot(symmetric_part(g.kernel) * u);
  return out;
}

}  // namespace symlti
