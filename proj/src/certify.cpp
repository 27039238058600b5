#include "symlti/certify.hpp"

#include <cmath>
#include <functional>

#include <Eigen/Dense>

namespace symlti {

std::string_view to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::Reciprocal: return "reciprocal";
    case CertificateKind::IOHamiltonian: return "io_hamiltonian";
    case CertificateKind::SignedTimeReversible: return "signed_time_reversible";
    case CertificateKind::TimeReversible: return "time_reversible";
    case CertificateKind::CycloLossless: return "cyclo_lossless";
  }
  return "unknown";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

using LinearMap = std::function<Matrix(const Matrix&)>;

struct Equation {
  LinearMap map;
  Matrix rhs;
};

std::vector<Equation> defining_equations(const StateSpaceSystem& sys, CertificateKind kind) {
  const Matrix& a = sys.A;
  const Matrix& b = sys.B;
  const Matrix& c = sys.C;
  const Matrix& d = sys.D;
  const Matrix sigma = sys.signature();
  const Eigen::Index m = sys.m();
  auto zero_map = [m](const Matrix&) { return Matrix::Zero(m, m).eval(); };

  switch (kind) {
    case CertificateKind::Reciprocal:
      return {
          {[a](const Matrix& g) { return (a.transpose() * g - g * a).eval(); }, Matrix::Zero(a.rows(), a.cols())},
          {[b](const Matrix& g) { return (b.transpose() * g).eval(); }, sigma * c},
          {zero_map, sigma * d - d.transpose() * sigma},
      };
    case CertificateKind::IOHamiltonian:
      return {
          {[a](const Matrix& w) { return (a.transpose() * w + w * a).eval(); }, Matrix::Zero(a.rows(), a.cols())},
          {[b](const Matrix& w) { return (b.transpose() * w).eval(); }, sigma * c},
          {zero_map, sigma * d - d.transpose() * sigma},
      };
    case CertificateKind::SignedTimeReversible:
      return {
          {[a](const Matrix& r) { return (r * a + a * r).eval(); }, Matrix::Zero(a.rows(), a.cols())},
          {[b](const Matrix& r) { return (r * b).eval(); }, b},
          {[c](const Matrix& r) { return (c * r).eval(); }, c},
          {zero_map, d},
      };
    case CertificateKind::TimeReversible:
      return {
          {[a](const Matrix& r) { return (r * a + a * r).eval(); }, Matrix::Zero(a.rows(), a.cols())},
          {[b](const Matrix& r) { return (r * b).eval(); }, -b},
          {[c](const Matrix& r) { return (c * r).eval(); }, c},
      };
    case CertificateKind::CycloLossless:
      return {
          {[a](const Matrix& q) { return (a.transpose() * q + q * a).eval(); }, Matrix::Zero(a.rows(), a.cols())},
          {[b](const Matrix& q) { return (b.transpose() * q).eval(); }, c},
          {zero_map, d + d.transpose()},
      };
  }
  return {};
}

SymmetryTag symmetry_of(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::Reciprocal:
    case CertificateKind::CycloLossless:
      return SymmetryTag::Symmetric;
    case CertificateKind::IOHamiltonian:
      return SymmetryTag::SkewSymmetric;
    default:
      return SymmetryTag::None;
  }
}

bool is_reversal(CertificateKind kind) {
  return kind == CertificateKind::SignedTimeReversible || kind == CertificateKind::TimeReversible;
}

double residual_scale(const StateSpaceSystem& sys, const Matrix& m) {
  return 1.0 + m.norm() * (sys.A.norm() + sys.B.norm() + sys.C.norm()) + sys.B.norm() + sys.C.norm() +
         sys.D.norm();
}

Matrix tidy(CertificateKind kind, const Matrix& m) {
  switch (symmetry_of(kind)) {
    case SymmetryTag::Symmetric: return symmetric_part(m);
    case SymmetryTag::SkewSymmetric: return skew_part(m);
    case SymmetryTag::None: return m;
  }
  return m;
}

double structure_defect(CertificateKind kind, const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  switch (symmetry_of(kind)) {
    case SymmetryTag::Symmetric: return (m - m.transpose()).norm() / (1.0 + m.norm());
    case SymmetryTag::SkewSymmetric: return (m + m.transpose()).norm() / (1.0 + m.norm());
    case SymmetryTag::None:
      return (m * m - Matrix::Identity(m.rows(), m.cols())).norm() / (1.0 + m.squaredNorm());
  }
  return 0.0;
}

Certificate make_certificate(const StateSpaceSystem& sys, CertificateKind kind, const Matrix& m) {
  Certificate cert;
  cert.kind = kind;
  cert.matrix = tidy(kind, m);
  cert.algebraic_residual = algebraic_residual(sys, kind, cert.matrix);
  cert.frequency_residual = frequency_residual(sys, kind);
  if (symmetry_of(kind) == SymmetryTag::Symmetric) cert.definiteness = classify_definiteness(cert.matrix);
  return cert;
}

Certificate search(const StateSpaceSystem& sys, CertificateKind kind, const Tolerances& tol) {
  sys.validate();
  const Eigen::Index n = sys.n();
  LinearConstraintSystem lcs(n, n, symmetry_of(kind));
  for (const Equation& eq : defining_equations(sys, kind)) lcs.add_equation(eq.map, eq.rhs);
  const StructuredSolution sol = solve_structured(lcs, tol);
  const std::string name(to_string(kind));
  if (sol.kind == StructuredSolution::Kind::Infeasible) {
    throw Error(ErrorCode::Infeasible, name + " certificate equations are inconsistent").with_residual(sol.residual);
  }
  if (sol.kind == StructuredSolution::Kind::Family) {
    throw Error(ErrorCode::NonUnique, name + " certificate is not unique (non-minimal system)")
        .with_family_dimension(static_cast<int>(sol.family.size()))
        .with_residual(sol.residual);
  }
  if (n > 0 && min_singular_value(sol.particular) <= tol.null_tol * std::max(1.0, sol.particular.norm()) * 1e2) {
    throw Error(ErrorCode::Infeasible, name + " equations force a singular matrix").with_residual(sol.residual);
  }
  Certificate cert = make_certificate(sys, kind, sol.particular);
  if (is_reversal(kind) && structure_defect(kind, cert.matrix) > tol.feas_tol) {
    throw Error(ErrorCode::NotInvolution, "reversal map does not square to the identity")
        .with_residual(structure_defect(kind, cert.matrix));
  }
  return cert;
}

std::vector<Complex> paired_samples(const Matrix& a) {
  // Keep s only when -s also avoids the spectrum.
  const std::vector<Complex> base = frequency_samples(a);
  const CVector lam = eigenvalues(a);
  std::vector<Complex> kept;
  for (const Complex& s : base) {
    bool near = false;
    for (Eigen::Index i = 0; i < lam.size(); ++i) near = near || std::abs(-s - lam(i)) <= 1e-6;
    if (!near) kept.push_back(s);
  }
  return kept;
}

}  // namespace

double algebraic_residual(const StateSpaceSystem& sys, CertificateKind kind, const Matrix& m) {
  if (m.rows() != sys.n() || m.cols() != sys.n()) throw Error(ErrorCode::Dimension, "certificate must be n x n");
  double sq = 0.0;
  for (const Equation& eq : defining_equations(sys, kind)) sq += (eq.map(m) - eq.rhs).squaredNorm();
  return std::sqrt(sq) / residual_scale(sys, m);
}

double frequency_residual(const StateSpaceSystem& sys, CertificateKind kind) {
  const Matrix sigma = sys.signature();
  double worst = 0.0;
  for (const Complex& s : paired_samples(sys.A)) {
    CMatrix k, km;
    try {
      k = transfer(sys, s);
      km = transfer(sys, -s);
    } catch (const Error&) {
      continue;
    }
    CMatrix diff;
    switch (kind) {
      case CertificateKind::Reciprocal: diff = sigma * k - k.transpose() * sigma; break;
      case CertificateKind::IOHamiltonian: diff = sigma * k - km.transpose() * sigma; break;
      case CertificateKind::SignedTimeReversible: diff = k + km; break;
      case CertificateKind::TimeReversible: diff = k - km; break;
      case CertificateKind::CycloLossless: diff = k + km.transpose(); break;
    }
    worst = std::max(worst, diff.norm() / (1.0 + std::max(k.norm(), km.norm())));
  }
  return worst;
}

Certificate find_reciprocal_G(const StateSpaceSystem& sys, bool require_minimal, const Tolerances& tol) {
  if (require_minimal && !minimality(sys, tol).minimal()) throw Error(ErrorCode::NotMinimal, "system is not minimal");
  return search(sys, CertificateKind::Reciprocal, tol);
}

Certificate find_io_hamiltonian_Omega(const StateSpaceSystem& sys, bool require_minimal, const Tolerances& tol) {
  if (require_minimal && !minimality(sys, tol).minimal()) throw Error(ErrorCode::NotMinimal, "system is not minimal");
  if (sys.n() % 2 != 0) {
    throw Error(ErrorCode::Infeasible, "odd state dimension admits no invertible skew-symmetric form");
  }
  return search(sys, CertificateKind::IOHamiltonian, tol);
}

Certificate find_signed_time_reversal(const StateSpaceSystem& sys, const Tolerances& tol) {
  return search(sys, CertificateKind::SignedTimeReversible, tol);
}

Certificate find_time_reversal(const StateSpaceSystem& sys, const Tolerances& tol) {
  return search(sys, CertificateKind::TimeReversible, tol);
}

Certificate find_cyclo_lossless_Q(const StateSpaceSystem& sys, const Tolerances& tol) {
  return search(sys, CertificateKind::CycloLossless, tol);
}

Certificate find_certificate(const StateSpaceSystem& sys, CertificateKind kind, const Tolerances& tol) {
  switch (kind) {
    case CertificateKind::Reciprocal: return find_reciprocal_G(sys, false, tol);
    case CertificateKind::IOHamiltonian: return find_io_hamiltonian_Omega(sys, false, tol);
    case CertificateKind::SignedTimeReversible: return find_signed_time_reversal(sys, tol);
    case CertificateKind::TimeReversible: return find_time_reversal(sys, tol);
    case CertificateKind::CycloLossless: return find_cyclo_lossless_Q(sys, tol);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown certificate kind");
}

CertificateCheck verify_certificate(const StateSpaceSystem& sys, const Certificate& cert, const Tolerances& tol) {
  CertificateCheck chk;
  if (cert.matrix.rows() != sys.n() || cert.matrix.cols() != sys.n() || !cert.matrix.allFinite()) {
    chk.algebraic_residual = std::numeric_limits<double>::infinity();
    chk.structure_residual = std::numeric_limits<double>::infinity();
    return chk;
  }
  chk.algebraic_residual = algebraic_residual(sys, cert.kind, cert.matrix);
  chk.frequency_residual = frequency_residual(sys, cert.kind);
  chk.structure_residual = structure_defect(cert.kind, cert.matrix);
  chk.min_singular_value = sys.n() == 0 ? 1.0 : min_singular_value(cert.matrix);
  const bool invertible = chk.min_singular_value > tol.null_tol * std::max(1.0, cert.matrix.norm()) * 1e2;
  chk.valid = invertible && chk.algebraic_residual <= tol.feas_tol && chk.frequency_residual <= tol.feas_tol &&
              chk.structure_residual <= tol.feas_tol;
  return chk;
}

Certificate two_of_three(const StateSpaceSystem& sys, const Certificate& first, const Certificate& second,
                         const Tolerances& tol) {
  auto allowed = [](CertificateKind k) {
    return k == CertificateKind::IOHamiltonian || k == CertificateKind::Reciprocal ||
           k == CertificateKind::TimeReversible;
  };
  if (!allowed(first.kind) || !allowed(second.kind) || first.kind == second.kind) {
    throw Error(ErrorCode::KindClash, "need two distinct kinds among io_hamiltonian, reciprocal, time_reversible");
  }
  for (const Certificate* c : {&first, &second}) {
    const CertificateCheck chk = verify_certificate(sys, *c, tol);
    if (!chk.valid) {
      throw Error(ErrorCode::ThirdInvalid, std::string(to_string(c->kind)) + " input is not a valid certificate")
          .with_residual(std::max(chk.algebraic_residual, chk.structure_residual));
    }
  }
  auto pick = [&](CertificateKind k) -> const Matrix& { return first.kind == k ? first.matrix : second.matrix; };
  const bool has_g = first.kind == CertificateKind::Reciprocal || second.kind == CertificateKind::Reciprocal;
  const bool has_w = first.kind == CertificateKind::IOHamiltonian || second.kind == CertificateKind::IOHamiltonian;

  CertificateKind third;
  Matrix m;
  double identity_residual = 0.0;
  if (has_g && has_w) {
    const Matrix& g = pick(CertificateKind::Reciprocal);
    const Matrix& w = pick(CertificateKind::IOHamiltonian);
    const Eigen::FullPivLU<Matrix> lu(w);
    third = CertificateKind::TimeReversible;
    m = lu.solve(g);
    identity_residual = (g * lu.solve(g) - w).norm() / (1.0 + w.norm());
  } else if (has_g) {
    const Matrix& g = pick(CertificateKind::Reciprocal);
    const Matrix& r = pick(CertificateKind::TimeReversible);
    third = CertificateKind::IOHamiltonian;
    m = g * r;
    identity_residual = (r.transpose() * g * r + g).norm() / (1.0 + g.norm());
  } else {
    const Matrix& w = pick(CertificateKind::IOHamiltonian);
    const Matrix& r = pick(CertificateKind::TimeReversible);
    third = CertificateKind::Reciprocal;
    m = w * r;
    identity_residual = (r.transpose() * w * r + w).norm() / (1.0 + w.norm());
  }
  Certificate out = make_certificate(sys, third, m);
  const CertificateCheck chk = verify_certificate(sys, out, tol);
  if (!chk.valid || identity_residual > tol.feas_tol) {
    throw Error(ErrorCode::ThirdInvalid, "composed certificate fails its defining equations")
        .with_residual(std::max({chk.algebraic_residual, chk.structure_residual, identity_residual}));
  }
  return out;
}

LosslessReciprocalReversal reversal_from_lossless_reciprocal(const StateSpaceSystem& sys, const Certificate& q,
                                                             const Certificate& g, const Tolerances& tol) {
  if (q.kind != CertificateKind::CycloLossless || g.kind != CertificateKind::Reciprocal) {
    throw Error(ErrorCode::KindClash, "expected a cyclo_lossless and a reciprocal certificate");
  }
  for (const Certificate* c : {&q, &g}) {
    const CertificateCheck chk = verify_certificate(sys, *c, tol);
    if (!chk.valid) {
      throw Error(ErrorCode::CompatibilityFailed, std::string(to_string(c->kind)) + " certificate does not fit the system")
          .with_residual(chk.algebraic_residual);
    }
  }
  LosslessReciprocalReversal out;
  const Eigen::FullPivLU<Matrix> lu(q.matrix);
  const Matrix r = lu.solve(g.matrix);
  out.compatibility_residual = (q.matrix - g.matrix * lu.solve(g.matrix)).norm() / (1.0 + q.matrix.norm());
  out.compatible = out.compatibility_residual <= tol.feas_tol;
  out.d_zero = sys.D.norm() <= tol.feas_tol * (1.0 + sys.B.norm() + sys.C.norm());
  out.R = make_certificate(sys, CertificateKind::SignedTimeReversible, r);
  const CertificateCheck chk = verify_certificate(sys, out.R, tol);
  if (!chk.valid || !out.compatible || !out.d_zero) {
    throw Error(ErrorCode::CompatibilityFailed, "Q^{-1} G is not a signed time-reversal of the system")
        .with_residual(std::max({chk.algebraic_residual, chk.structure_residual, out.compatibility_residual}));
  }
  return out;
}

std::pair<Vector, double> memory_experiment(const StateSpaceSystem& sys, const Vector& target, double horizon,
                                            double h) {
  const Eigen::Index n = sys.n();
  const Eigen::Index steps = static_cast<Eigen::Index>(std::llround(horizon / h));
  if (steps < 2) throw Error(ErrorCode::InvalidArgument, "horizon must span at least two steps");
  const Matrix ctrb = solve_lyapunov(sys.A, sys.B * sys.B.transpose());
  const Matrix eat = matrix_exponential(sys.A, horizon);
  const Matrix wt = symmetric_part(ctrb - eat * ctrb * eat.transpose());
  const Eigen::LDLT<Matrix> ldlt(wt);
  if (ldlt.info() != Eigen::Success || min_eigenvalue(wt) <= 1e-12 * std::max(1.0, wt.norm())) {
    throw Error(ErrorCode::NotControllable, "finite-horizon Gramian is singular");
  }

  // Steering on tau = -T + k h, u(tau) = B^T e^{-A^T tau} W_T^{-1} target.
  Matrix u(sys.m(), steps + 1);
  Vector z = eat.transpose() * ldlt.solve(target);
  const Matrix step_back = matrix_exponential(sys.A.transpose(), -h);
  for (Eigen::Index k = 0; k <= steps; ++k) {
    u.col(k) = sys.B.transpose() * z;
    z = step_back * z;
  }
  const Trajectory drive = simulate(sys, u, Vector::Zero(n), h, -horizon);
  const Vector x0 = drive.states.col(steps);

  const Trajectory free = simulate(sys, Matrix::Zero(sys.m(), steps + 1), x0, h, 0.0);
  const Vector sigma = sys.sigma;
  double integral = 0.0;
  for (Eigen::Index k = 0; k <= steps; ++k) {
    // u(-t_k) is column steps - k of the steering samples.
    const double f = u.col(steps - k).dot(sigma.cwiseProduct(free.outputs.col(k)));
    integral += (k == 0 || k == steps) ? 0.5 * f : f;
  }
  return {x0, integral * h};
}

Matrix estimate_G_from_io(const StateSpaceSystem& sys, double horizon, double h, const Tolerances& tol) {
  sys.validate();
  const Eigen::Index n = sys.n();
  if (!is_hurwitz(sys.A, tol)) throw Error(ErrorCode::NotHurwitz, "estimator needs a Hurwitz A");
  if (!minimality(sys, tol).controllable) throw Error(ErrorCode::NotControllable, "system is not controllable");
  if (n == 0) return Matrix(0, 0);

  LinearConstraintSystem lcs(n, n, SymmetryTag::Symmetric);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      Vector target = Vector::Unit(n, i);
      if (j != i) target += Vector::Unit(n, j);
      const auto [x0, value] = memory_experiment(sys, target, horizon, h);
      const Matrix outer = x0 * x0.transpose();
      lcs.append_rows(Eigen::Map<const Matrix>(outer.data(), 1, n * n), Vector::Constant(1, value));
    }
  }
  Tolerances loose = tol;
  loose.feas_tol = std::numeric_limits<double>::infinity();
  const StructuredSolution sol = solve_structured(lcs, loose);
  if (!sol.family.empty()) throw Error(ErrorCode::NotControllable, "experiments do not determine G");
  return symmetric_part(sol.particular);
}

VerdictReport certify_structures(const StateSpaceSystem& sys, const Tolerances& tol) {
  VerdictReport report;
  const std::pair<CertificateKind, Verdict VerdictReport::*> kinds[] = {
      {CertificateKind::Reciprocal, &VerdictReport::reciprocal},
      {CertificateKind::IOHamiltonian, &VerdictReport::io_hamiltonian},
      {CertificateKind::SignedTimeReversible, &VerdictReport::signed_time_reversible},
      {CertificateKind::TimeReversible, &VerdictReport::time_reversible},
      {CertificateKind::CycloLossless, &VerdictReport::cyclo_lossless},
  };
  const bool minimal = minimality(sys, tol).minimal();
  if (!minimal) report.notes.emplace_back("system is not minimal; certificate uniqueness does not apply");
  for (const auto& [kind, slot] : kinds) {
    const std::string name(to_string(kind));
    try {
      Certificate cert = find_certificate(sys, kind, tol);
      const CertificateCheck chk = verify_certificate(sys, cert, tol);
      report.*slot = chk.valid ? Verdict::True : Verdict::Unknown;
      if (!chk.valid) report.notes.push_back(name + ": certificate found but re-verification failed");
      report.certificates.push_back(std::move(cert));
    } catch (const Error& e) {
      switch (e.code()) {
        case ErrorCode::Infeasible:
          // Without minimality another realization of the same behavior may
          // still carry a certificate.
          report.*slot = minimal ? Verdict::False : Verdict::Unknown;
          report.notes.push_back(name + ": " + e.what());
          break;
        default:
          report.*slot = Verdict::Unknown;
          report.notes.push_back(name + ": " + e.what());
          break;
      }
    }
  }
  return report;
}

}  // namespace symlti
