#include "symlti/matcore.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace symlti {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Dimension: return "Dimension";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SpectrumOverlap: return "SpectrumOverlap";
    case ErrorCode::NotHurwitz: return "NotHurwitz";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::ImaginaryAxisEigenvalue: return "ImaginaryAxisEigenvalue";
    case ErrorCode::NotStabilizable: return "NotStabilizable";
    case ErrorCode::SingularResolvent: return "SingularResolvent";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::NotMinimal: return "NotMinimal";
    case ErrorCode::NotControllable: return "NotControllable";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::NonUnique: return "NonUnique";
    case ErrorCode::NotInvolution: return "NotInvolution";
    case ErrorCode::KindClash: return "KindClash";
    case ErrorCode::ThirdInvalid: return "ThirdInvalid";
    case ErrorCode::CompatibilityFailed: return "CompatibilityFailed";
    case ErrorCode::NotPassive: return "NotPassive";
    case ErrorCode::SingularFeedthrough: return "SingularFeedthrough";
    case ErrorCode::PropositionViolated: return "PropositionViolated";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::IterateSingular: return "IterateSingular";
    case ErrorCode::LmiViolated: return "LmiViolated";
    case ErrorCode::Indefinite: return "Indefinite";
    case ErrorCode::FeedthroughNonzero: return "FeedthroughNonzero";
    case ErrorCode::AsymmetricP: return "AsymmetricP";
    case ErrorCode::NotCompatible: return "NotCompatible";
    case ErrorCode::SignatureNotIdentity: return "SignatureNotIdentity";
    case ErrorCode::BlockDefinitenessFailed: return "BlockDefinitenessFailed";
    case ErrorCode::NotRelaxation: return "NotRelaxation";
    case ErrorCode::EigenspaceImbalance: return "EigenspaceImbalance";
    case ErrorCode::NotAntiSymplectic: return "NotAntiSymplectic";
    case ErrorCode::PatternMismatch: return "PatternMismatch";
    case ErrorCode::SingularGramian: return "SingularGramian";
    case ErrorCode::NotReciprocal: return "NotReciprocal";
    case ErrorCode::NotDirac: return "NotDirac";
    case ErrorCode::NotLagrangian: return "NotLagrangian";
    case ErrorCode::ConstraintViolated: return "ConstraintViolated";
    case ErrorCode::OddDimension: return "OddDimension";
  }
  return "Unknown";
}

std::string_view to_string(Definiteness d) {
  switch (d) {
    case Definiteness::PositiveDefinite: return "positive_definite";
    case Definiteness::PositiveSemidefinite: return "positive_semidefinite";
    case Definiteness::NegativeDefinite: return "negative_definite";
    case Definiteness::NegativeSemidefinite: return "negative_semidefinite";
    case Definiteness::Indefinite: return "indefinite";
    case Definiteness::Zero: return "zero";
  }
  return "unknown";
}

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::Dimension, std::string(what) + " must be square");
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " has non-finite entries");
}

}  // namespace

// ---------------------------------------------------------------------------
// Linear constraint systems

LinearConstraintSystem::LinearConstraintSystem(Eigen::Index rows, Eigen::Index cols, SymmetryTag tag)
    : rows_(rows), cols_(cols), tag_(tag), coefficients_(0, rows * cols), rhs_(0) {
  if (rows < 0 || cols < 0) throw Error(ErrorCode::Dimension, "negative unknown shape");
  if (tag != SymmetryTag::None && rows != cols) {
    throw Error(ErrorCode::Dimension, "symmetric/skew unknowns must be square");
  }
}

void LinearConstraintSystem::append_rows(const Matrix& coefficients, const Vector& rhs) {
  if (coefficients.cols() != rows_ * cols_ || coefficients.rows() != rhs.size()) {
    throw Error(ErrorCode::Dimension, "constraint rows do not match the unknown shape");
  }
  const Eigen::Index old = coefficients_.rows();
  coefficients_.conservativeResize(old + coefficients.rows(), Eigen::NoChange);
  coefficients_.bottomRows(coefficients.rows()) = coefficients;
  rhs_.conservativeResize(old + rhs.size());
  rhs_.tail(rhs.size()) = rhs;
}

Matrix LinearConstraintSystem::parameter_basis() const {
  const Eigen::Index n = rows_;
  const double s = 1.0 / std::sqrt(2.0);
  switch (tag_) {
    case SymmetryTag::None:
      return Matrix::Identity(rows_ * cols_, rows_ * cols_);
    case SymmetryTag::Symmetric: {
      Matrix basis = Matrix::Zero(n * n, n * (n + 1) / 2);
      Eigen::Index k = 0;
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i <= j; ++i, ++k) {
          if (i == j) {
            basis(i + j * n, k) = 1.0;
          } else {
            basis(i + j * n, k) = s;
            basis(j + i * n, k) = s;
          }
        }
      }
      return basis;
    }
    case SymmetryTag::SkewSymmetric: {
      Matrix basis = Matrix::Zero(n * n, n * (n - 1) / 2);
      Eigen::Index k = 0;
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < j; ++i, ++k) {
          basis(i + j * n, k) = s;
          basis(j + i * n, k) = -s;
        }
      }
      return basis;
    }
  }
  return {};
}

StructuredSolution solve_structured(const LinearConstraintSystem& system, const Tolerances& tol) {
  const Matrix basis = system.parameter_basis();
  const Matrix m = system.coefficients() * basis;
  const Vector& rhs = system.rhs();
  const Eigen::Index p = basis.cols();

  StructuredSolution out;
  out.rhs_norm = rhs.norm();

  Vector y = Vector::Zero(p);
  Matrix null_basis;
  if (m.rows() == 0 || p == 0) {
    out.rank = 0;
    null_basis = Matrix::Identity(p, p);
  } else {
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const Vector& sv = svd.singularValues();
    const double cutoff = tol.null_tol * (sv.size() > 0 ? sv(0) : 0.0);
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > cutoff && sv(r) > 0.0) ++r;
    out.rank = r;
    if (r > 0) {
      const Vector coeff = svd.matrixU().leftCols(r).transpose() * rhs;
      y = svd.matrixV().leftCols(r) * coeff.cwiseQuotient(sv.head(r));
    }
    null_basis = svd.matrixV().rightCols(p - r);
  }

  const Vector x = basis * y;
  out.particular = Eigen::Map<const Matrix>(x.data(), system.rows(), system.cols());
  out.residual = m.rows() == 0 ? 0.0 : (m * y - rhs).norm();
  for (Eigen::Index k = 0; k < null_basis.cols(); ++k) {
    const Vector v = basis * null_basis.col(k);
    out.family.emplace_back(Eigen::Map<const Matrix>(v.data(), system.rows(), system.cols()));
  }

  if (out.residual > tol.feas_tol * (1.0 + out.rhs_norm)) {
    out.kind = StructuredSolution::Kind::Infeasible;
  } else if (out.family.empty()) {
    out.kind = StructuredSolution::Kind::Unique;
  } else {
    out.kind = StructuredSolution::Kind::Family;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sylvester / Lyapunov

Matrix solve_sylvester(const Matrix& a, const Matrix& b, const Matrix& c, const Tolerances& tol) {
  require_square(a, "A");
  require_square(b, "B");
  if (c.rows() != a.rows() || c.cols() != b.rows()) {
    throw Error(ErrorCode::Dimension, "C must be rows(A) x rows(B)");
  }
  require_finite(a, "A");
  require_finite(b, "B");
  require_finite(c, "C");
  const Eigen::Index n = a.rows();
  const Eigen::Index m = b.rows();
  if (n == 0 || m == 0) return Matrix::Zero(n, m);

  const CVector la = eigenvalues(a);
  const CVector lb = eigenvalues(b);
  const double scale = 1.0 + a.norm() + b.norm();
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < la.size(); ++i) {
    for (Eigen::Index j = 0; j < lb.size(); ++j) gap = std::min(gap, std::abs(la(i) + lb(j)));
  }
  if (gap <= 10.0 * tol.null_tol * scale) {
    throw Error(ErrorCode::SpectrumOverlap, "A and -B share an eigenvalue").with_residual(gap);
  }

  const Matrix k = Eigen::kroneckerProduct(Matrix::Identity(m, m), a).eval() +
                   Eigen::kroneckerProduct(b.transpose(), Matrix::Identity(n, n)).eval();
  const Eigen::Map<const Vector> rhs(c.data(), c.size());
  Eigen::PartialPivLU<Matrix> lu(k);
  Vector x = lu.solve(rhs);
  // One step of iterative refinement keeps the residual at roundoff level for
  // moderately conditioned operators.
  x += lu.solve(rhs - k * x);
  Matrix out = Eigen::Map<const Matrix>(x.data(), n, m);
  const double residual = (a * out + out * b - c).norm();
  if (!out.allFinite() || residual > 1e-8 * (1.0 + c.norm()) * scale) {
    throw Error(ErrorCode::SpectrumOverlap, "Sylvester operator numerically singular").with_residual(residual);
  }
  return out;
}

Matrix solve_lyapunov(const Matrix& a, const Matrix& w, const Tolerances& tol) {
  require_square(a, "A");
  if (w.rows() != a.rows() || w.cols() != a.cols()) throw Error(ErrorCode::Dimension, "W must match A");
  if (asymmetry(w) > tol.sym_tol * std::max(1.0, w.norm())) {
    throw Error(ErrorCode::NotSymmetric, "W must be symmetric");
  }
  if (a.rows() == 0) return Matrix(0, 0);
  if (!is_hurwitz(a, tol)) throw Error(ErrorCode::NotHurwitz, "A has an eigenvalue with nonnegative real part");
  return symmetric_part(solve_sylvester(a, a.transpose(), -w, tol));
}

// ---------------------------------------------------------------------------
// Exponentials

Matrix matrix_exponential(const Matrix& a, double t) {
  require_square(a, "A");
  require_finite(a, "A");
  if (a.rows() == 0) return Matrix(0, 0);
  const Matrix at = a * t;
  return at.exp();
}

std::pair<Matrix, Matrix> exponential_and_integral(const Matrix& a, double h) {
  require_square(a, "A");
  const Eigen::Index n = a.rows();
  Matrix big = Matrix::Zero(2 * n, 2 * n);
  big.topLeftCorner(n, n) = a;
  big.topRightCorner(n, n) = Matrix::Identity(n, n);
  const Matrix e = matrix_exponential(big, h);
  return {e.topLeftCorner(n, n), e.topRightCorner(n, n)};
}

// ---------------------------------------------------------------------------
// Riccati

namespace {

double hamiltonian_axis_tol(const Matrix& h) { return 1e-7 * (1.0 + h.norm()); }

void check_stabilizable(const Matrix& f, const Matrix& p, bool stable, const Tolerances& tol) {
  // PBH test on the modes that the selected branch must move.
  const Eigen::Index n = f.rows();
  const CVector lf = eigenvalues(f);
  const double scale = 1.0 + f.norm() + p.norm();
  for (Eigen::Index i = 0; i < lf.size(); ++i) {
    const double re = lf(i).real();
    const bool needs_control = stable ? re >= -1e-9 * scale : re <= 1e-9 * scale;
    if (!needs_control) continue;
    CMatrix pbh(n, 2 * n);
    pbh.leftCols(n) = f.cast<Complex>() - lf(i) * CMatrix::Identity(n, n);
    pbh.rightCols(n) = p.cast<Complex>();
    Eigen::JacobiSVD<CMatrix> svd(pbh);
    const Eigen::VectorXd sv = svd.singularValues();
    if (sv(n - 1) <= std::max(tol.null_tol, 1e-9) * scale) {
      throw Error(ErrorCode::NotStabilizable, "(F, P) has an uncontrollable mode that must be moved")
          .with_residual(sv(n - 1));
    }
  }
}

Matrix riccati_residual(const Matrix& f, const Matrix& p, const Matrix& s, const Matrix& x) {
  return f.transpose() * x + x * f - x * p * x + s;
}

}  // namespace

Matrix riccati_solution(const Matrix& f, const Matrix& p, const Matrix& s, bool stable, const Tolerances& tol) {
  require_square(f, "F");
  const Eigen::Index n = f.rows();
  if (p.rows() != n || p.cols() != n || s.rows() != n || s.cols() != n) {
    throw Error(ErrorCode::Dimension, "F, P, S must share one square shape");
  }
  require_finite(f, "F");
  require_finite(p, "P");
  require_finite(s, "S");
  const double sym_scale = std::max(1.0, std::max(p.norm(), s.norm()));
  if (asymmetry(p) > tol.sym_tol * sym_scale || asymmetry(s) > tol.sym_tol * sym_scale) {
    throw Error(ErrorCode::NotSymmetric, "P and S must be symmetric");
  }
  if (n == 0) return Matrix(0, 0);

  check_stabilizable(f, p, stable, tol);

  Matrix h(2 * n, 2 * n);
  h << f, -p, -s, -f.transpose();
  Eigen::EigenSolver<Matrix> es(h, true);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "Hamiltonian eigensolver failed");
  const CVector lam = es.eigenvalues();
  const double axis = hamiltonian_axis_tol(h);
  std::vector<Eigen::Index> chosen;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (std::abs(lam(i).real()) <= axis) {
      throw Error(ErrorCode::ImaginaryAxisEigenvalue, "Hamiltonian matrix has an eigenvalue on the imaginary axis")
          .with_residual(std::abs(lam(i).real()));
    }
    if ((lam(i).real() < 0.0) == stable) chosen.push_back(i);
  }
  if (static_cast<Eigen::Index>(chosen.size()) != n) {
    throw Error(ErrorCode::ImaginaryAxisEigenvalue, "Hamiltonian spectrum is not split evenly");
  }
  std::sort(chosen.begin(), chosen.end(), [&](Eigen::Index i, Eigen::Index j) {
    if (lam(i).real() != lam(j).real()) return lam(i).real() < lam(j).real();
    return lam(i).imag() < lam(j).imag();
  });
  CMatrix u(2 * n, n);
  for (Eigen::Index k = 0; k < n; ++k) u.col(k) = es.eigenvectors().col(chosen[static_cast<std::size_t>(k)]);
  const CMatrix u1 = u.topRows(n);
  const CMatrix u2 = u.bottomRows(n);
  Eigen::JacobiSVD<CMatrix> svd(u1);
  const Eigen::VectorXd sv = svd.singularValues();
  if (sv(n - 1) <= 1e-12 * sv(0)) {
    throw Error(ErrorCode::NotStabilizable, "invariant subspace is not a graph over the state coordinates");
  }
  const CMatrix xc = u1.transpose().fullPivLu().solve(u2.transpose()).transpose();
  Matrix x = symmetric_part(xc.real());

  // Newton refinement on the Riccati residual.
  const double scale = 1.0 + f.norm() + p.norm() + s.norm();
  for (int iter = 0; iter < 3; ++iter) {
    const Matrix res = riccati_residual(f, p, s, x);
    if (res.norm() <= 1e-14 * scale * (1.0 + x.norm())) break;
    const Matrix fc = f - p * x;
    try {
      x += symmetric_part(solve_sylvester(fc.transpose(), fc, -res, tol));
    } catch (const Error&) {
      break;
    }
  }
  const double residual = riccati_residual(f, p, s, x).norm();
  if (!x.allFinite() || residual > 1e-8 * scale * (1.0 + x.norm())) {
    throw Error(ErrorCode::NoConvergence, "Riccati residual too large").with_residual(residual);
  }
  return x;
}

Matrix solve_care(const Matrix& f, const Matrix& p, const Matrix& s, const Tolerances& tol) {
  return riccati_solution(f, p, s, true, tol);
}

// ---------------------------------------------------------------------------
// Decompositions

Eigen::Index numerical_rank(const Matrix& m, const Tolerances& tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& sv = svd.singularValues();
  const double cutoff = tol.null_tol * sv(0);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > cutoff && sv(r) > 0.0) ++r;
  return r;
}

Matrix nullspace(const Matrix& m, const Tolerances& tol) {
  const Eigen::Index c = m.cols();
  if (m.rows() == 0 || c == 0) return Matrix::Identity(c, c);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double cutoff = tol.null_tol * sv(0);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > cutoff && sv(r) > 0.0) ++r;
  return svd.matrixV().rightCols(c - r);
}

SymmetricEigen symmetric_eig(const Matrix& m, const Tolerances& tol) {
  require_square(m, "M");
  if (asymmetry(m) > tol.sym_tol * std::max(1.0, m.norm())) {
    throw Error(ErrorCode::NotSymmetric, "matrix is not symmetric").with_residual(asymmetry(m));
  }
  SymmetricEigen out;
  if (m.rows() == 0) {
    out.values = Vector(0);
    out.vectors = Matrix(0, 0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric_part(m));
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  for (Eigen::Index k = 0; k < out.vectors.cols(); ++k) {
    for (Eigen::Index i = 0; i < out.vectors.rows(); ++i) {
      if (std::abs(out.vectors(i, k)) > 1e-12) {
        if (out.vectors(i, k) < 0.0) out.vectors.col(k) *= -1.0;
        break;
      }
    }
  }
  return out;
}

CVector eigenvalues(const Matrix& a) {
  require_square(a, "A");
  if (a.rows() == 0) return CVector(0);
  Eigen::EigenSolver<Matrix> es(a, false);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "eigensolver failed");
  return es.eigenvalues();
}

double spectral_abscissa(const Matrix& a) {
  const CVector l = eigenvalues(a);
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < l.size(); ++i) best = std::max(best, l(i).real());
  return best;
}

bool is_hurwitz(const Matrix& a, const Tolerances& tol) {
  if (a.rows() == 0) return true;
  return spectral_abscissa(a) < -tol.null_tol * (1.0 + a.norm());
}

Matrix symmetric_part(const Matrix& m) { return 0.5 * (m + m.transpose()); }
Matrix skew_part(const Matrix& m) { return 0.5 * (m - m.transpose()); }
double asymmetry(const Matrix& m) {
  require_square(m, "M");
  return (m - m.transpose()).norm();
}

double min_singular_value(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

Matrix psd_sqrt(const Matrix& m, double clip) {
  require_square(m, "M");
  if (m.rows() == 0) return Matrix(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric_part(m));
  Vector l = es.eigenvalues();
  const double floor = -clip * std::max(1.0, m.norm());
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    if (l(i) < floor) throw Error(ErrorCode::Indefinite, "matrix has a negative eigenvalue").with_residual(l(i));
    l(i) = std::sqrt(std::max(0.0, l(i)));
  }
  return es.eigenvectors() * l.asDiagonal() * es.eigenvectors().transpose();
}

double min_eigenvalue(const Matrix& m) {
  require_square(m, "M");
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

bool is_psd(const Matrix& m, double rel) {
  return min_eigenvalue(m) >= -rel * std::max(1.0, m.norm());
}

Definiteness classify_definiteness(const Matrix& m, double rel) {
  require_square(m, "M");
  if (m.rows() == 0) return Definiteness::Zero;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric_part(m), Eigen::EigenvaluesOnly);
  const Vector& l = es.eigenvalues();
  const double thr = rel * std::max(l.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  const bool pos = (l.array() > thr).any();
  const bool neg = (l.array() < -thr).any();
  const bool zero = (l.array().abs() <= thr).any();
  if (pos && neg) return Definiteness::Indefinite;
  if (pos) return zero ? Definiteness::PositiveSemidefinite : Definiteness::PositiveDefinite;
  if (neg) return zero ? Definiteness::NegativeSemidefinite : Definiteness::NegativeDefinite;
  return Definiteness::Zero;
}

}  // namespace symlti
