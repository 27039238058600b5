#include "symlti/passivity.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace symlti {

std::string_view to_string(StorageKind kind) {
  switch (kind) {
    case StorageKind::MinStorage: return "min_storage";
    case StorageKind::MaxStorage: return "max_storage";
    case StorageKind::Compatible: return "compatible";
    case StorageKind::Generic: return "generic";
  }
  return "generic";
}

Matrix lmi_slack(const StateSpaceSystem& sys, const Matrix& q) {
  const Eigen::Index n = sys.n();
  const Eigen::Index m = sys.m();
  if (q.rows() != n || q.cols() != n) throw Error(ErrorCode::Dimension, "Q must be n x n");
  Matrix slack(n + m, n + m);
  slack.topLeftCorner(n, n) = -sys.A.transpose() * q - q * sys.A;
  slack.topRightCorner(n, m) = sys.C.transpose() - q * sys.B;
  slack.bottomLeftCorner(m, n) = sys.C - sys.B.transpose() * q;
  slack.bottomRightCorner(m, m) = sys.D + sys.D.transpose();
  return symmetric_part(slack);
}

Vector lmi_slack_spectrum(const StateSpaceSystem& sys, const Matrix& q) {
  const Matrix slack = lmi_slack(sys, q);
  if (slack.rows() == 0) return Vector(0);
  return Eigen::SelfAdjointEigenSolver<Matrix>(slack, Eigen::EigenvaluesOnly).eigenvalues();
}

namespace {

double lmi_floor(const Matrix& slack, const Tolerances& tol) { return -tol.feas_tol * (1.0 + slack.norm()); }

StorageCertificate make_storage(const StateSpaceSystem& sys, const Matrix& q, StorageKind kind, bool lossless) {
  StorageCertificate s;
  s.Q = symmetric_part(q);
  s.slack_spectrum = lmi_slack_spectrum(sys, s.Q);
  s.lossless = lossless;
  s.kind = kind;
  return s;
}

}  // namespace

bool satisfies_lmi(const StateSpaceSystem& sys, const Matrix& q, const Tolerances& tol) {
  const Matrix slack = lmi_slack(sys, q);
  if (slack.rows() == 0) return true;
  return min_eigenvalue(slack) >= lmi_floor(slack, tol);
}

StorageCertificate kyp_storage(const StateSpaceSystem& sys, StorageObjective objective, const Tolerances& tol) {
  sys.validate();
  if (!minimality(sys, tol).minimal()) throw Error(ErrorCode::NotMinimal, "KYP storage requires a minimal system");
  const StorageKind kind = objective == StorageObjective::Min ? StorageKind::MinStorage : StorageKind::MaxStorage;
  const Matrix r0 = sys.D + sys.D.transpose();
  const Eigen::Index m = sys.m();

  const bool regular = m == 0 || min_eigenvalue(r0) > 1e-8 * std::max(1.0, r0.norm());
  if (!regular) {
    if (m > 0 && min_eigenvalue(r0) < -1e-8 * std::max(1.0, r0.norm())) {
      throw Error(ErrorCode::NotPassive, "D + D^T has a negative eigenvalue");
    }
    Certificate q;
    try {
      q = find_cyclo_lossless_Q(sys, tol);
    } catch (const Error& e) {
      throw Error(ErrorCode::SingularFeedthrough, std::string("D + D^T is singular and the system is not lossless (") +
                                                      e.what() + ")");
    }
    if (!is_psd(q.matrix)) throw Error(ErrorCode::NotPassive, "lossless storage is indefinite");
    return make_storage(sys, q.matrix, kind, true);
  }

  const Eigen::LLT<Matrix> llt(r0);
  const Matrix f = sys.A - sys.B * llt.solve(sys.C);
  const Matrix p = symmetric_part(sys.B * llt.solve(sys.B.transpose()));
  const Matrix s = -symmetric_part(sys.C.transpose() * llt.solve(sys.C));
  Matrix x;
  try {
    x = riccati_solution(f, p, s, objective == StorageObjective::Min, tol);
  } catch (const Error& e) {
    throw Error(ErrorCode::NotPassive, std::string("positive-real Riccati equation has no extremal solution (") +
                                           e.what() + ")");
  }
  StorageCertificate out = make_storage(sys, -x, kind, false);
  const Matrix slack = lmi_slack(sys, out.Q);
  if (out.slack_spectrum.size() > 0 && out.slack_spectrum(0) < lmi_floor(slack, tol)) {
    throw Error(ErrorCode::NotPassive, "Riccati storage violates the LMI").with_residual(out.slack_spectrum(0));
  }
  if (!is_psd(out.Q)) throw Error(ErrorCode::NotPassive, "extremal storage is not positive semidefinite");
  return out;
}

KernelInvarianceReport kernel_invariance_check(const StateSpaceSystem& sys, const StorageCertificate& q,
                                               const Tolerances& tol) {
  if (!satisfies_lmi(sys, q.Q, tol)) {
    throw Error(ErrorCode::PropositionViolated, "storage does not satisfy the LMI")
        .with_residual(min_eigenvalue(lmi_slack(sys, q.Q)));
  }
  KernelInvarianceReport rep;
  const Eigen::Index n = sys.n();
  Tolerances ktol = tol;
  ktol.null_tol = 1e-8;
  rep.kernel = n == 0 ? Matrix(0, 0) : nullspace(q.Q, ktol);
  const Matrix& k = rep.kernel;
  const double scale = 1.0 + sys.A.norm() + sys.C.norm();
  if (k.cols() > 0) {
    rep.invariance_residual = ((Matrix::Identity(n, n) - k * k.transpose()) * sys.A * k).norm();
    rep.output_residual = (sys.C * k).norm();
  }
  rep.observable = minimality(sys, tol).observable;
  const double bound = 1e-6 * scale;
  if (rep.invariance_residual > bound) {
    throw Error(ErrorCode::PropositionViolated, "ker Q is not A-invariant").with_residual(rep.invariance_residual);
  }
  if (rep.output_residual > bound) {
    throw Error(ErrorCode::PropositionViolated, "ker Q is not contained in ker C").with_residual(rep.output_residual);
  }
  if (rep.observable && k.cols() > 0) {
    throw Error(ErrorCode::PropositionViolated, "observable system with a nontrivial storage kernel")
        .with_family_dimension(static_cast<int>(k.cols()));
  }
  return rep;
}

CompatibleStorage compatible_Q(const StateSpaceSystem& sys, const Certificate& g, const Matrix& q0,
                               const Tolerances& tol) {
  if (g.kind != CertificateKind::Reciprocal) throw Error(ErrorCode::KindClash, "compatible_Q needs a reciprocal certificate");
  if (!verify_certificate(sys, g, tol).valid) throw Error(ErrorCode::NotReciprocal, "G does not certify reciprocity");
  const Eigen::Index n = sys.n();
  if (q0.rows() != n || q0.cols() != n) throw Error(ErrorCode::Dimension, "Q0 must be n x n");

  CompatibleStorage out;
  Matrix q = symmetric_part(q0);
  out.initial_lmi_ok = satisfies_lmi(sys, q, tol);
  const Matrix& gm = g.matrix;
  for (int iter = 0;; ++iter) {
    out.slack_min_history.push_back(n == 0 ? 0.0 : min_eigenvalue(lmi_slack(sys, q)));
    const Eigen::FullPivLU<Matrix> lu(q);
    if (n > 0 && min_singular_value(q) <= tol.null_tol * std::max(1.0, q.norm())) {
      throw Error(ErrorCode::IterateSingular, "compatibility iterate is singular").with_residual(min_singular_value(q));
    }
    const Matrix mirror = symmetric_part(gm * lu.solve(gm));
    out.residual = n == 0 ? 0.0 : (q - mirror).norm() / q.norm();
    out.iterations = iter;
    if (out.residual <= 1e-9) break;
    if (iter >= 500) {
      throw Error(ErrorCode::NoConvergence, "compatibility iteration did not converge").with_residual(out.residual);
    }
    q = 0.5 * (q + mirror);
  }
  if (!satisfies_lmi(sys, q, tol)) {
    throw Error(ErrorCode::LmiViolated, "compatible fixed point violates the LMI")
        .with_residual(out.slack_min_history.back());
  }
  out.storage = make_storage(sys, q, StorageKind::Compatible, false);
  const Vector& spec = out.storage.slack_spectrum;
  out.storage.lossless = spec.size() == 0 || spec.cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + lmi_slack(sys, q).norm());
  return out;
}

RelaxationVerdict relaxation_test(const StateSpaceSystem& sys, const Tolerances& tol) {
  RelaxationVerdict v;
  if ((sys.sigma.array() != 1.0).any()) {
    v.note = "sigma is not the identity";
    return v;
  }
  Certificate g;
  try {
    g = find_reciprocal_G(sys, false, tol);
  } catch (const Error& e) {
    v.note = std::string("not reciprocal: ") + e.what();
    return v;
  }
  v.G = g.matrix;
  const Matrix p = -g.matrix * sys.A;
  v.GA_psd = is_psd(symmetric_part(p));
  v.dissipation_slack_min = sys.n() + sys.m() == 0 ? 0.0 : min_eigenvalue(lmi_slack(sys, g.matrix));
  const bool g_posdef = g.definiteness == Definiteness::PositiveDefinite || sys.n() == 0;
  v.is_relaxation = g_posdef;
  const Matrix r0 = sys.D + sys.D.transpose();
  const bool d_ok = sys.m() == 0 || ((sys.D - sys.D.transpose()).norm() <= tol.sym_tol * (1.0 + sys.D.norm()) &&
                                     is_psd(r0));
  v.passive_by_structure = g_posdef && is_hurwitz(sys.A, tol) && d_ok;
  if (!g_posdef) v.note = "G is not positive definite";
  return v;
}

namespace {

// Maximizes the smallest eigenvalue of S0 + sum_k c_k S_k by gradient ascent
// on a soft-min surrogate with an increasing sharpness schedule. Stops early
// once the target is reached.
Vector maximize_min_eig(const Matrix& s0, const std::vector<Matrix>& dirs, double target) {
  const std::size_t p = dirs.size();
  Vector c = Vector::Zero(static_cast<Eigen::Index>(p));
  auto assemble = [&](const Vector& cc) {
    Matrix s = s0;
    for (std::size_t k = 0; k < p; ++k) s += cc(static_cast<Eigen::Index>(k)) * dirs[k];
    return s;
  };
  const double scale = 1.0 + s0.norm();
  auto softmin = [](const Vector& l, double beta, Vector* w) {
    const double lo = l.minCoeff();
    const Vector e = (-beta * (l.array() - lo)).exp().matrix();
    const double total = e.sum();
    if (w != nullptr) *w = e / total;
    return lo - std::log(total) / beta;
  };
  if (p == 0) return c;
  for (double beta = 1.0 / scale; beta <= 1e8 / scale; beta *= 10.0) {
    for (int it = 0; it < 300; ++it) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(assemble(c));
      const Vector& l = es.eigenvalues();
      if (l(0) >= target) return c;
      Vector w;
      const double f = softmin(l, beta, &w);
      Vector grad(static_cast<Eigen::Index>(p));
      for (std::size_t k = 0; k < p; ++k) {
        const Matrix proj = es.eigenvectors().transpose() * dirs[k] * es.eigenvectors();
        grad(static_cast<Eigen::Index>(k)) = w.dot(proj.diagonal());
      }
      const double gn = grad.norm();
      if (gn <= 1e-14 * scale) break;
      double step = scale / gn;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
        const Vector trial = c + step * grad / gn;
        Eigen::SelfAdjointEigenSolver<Matrix> et(assemble(trial), Eigen::EigenvaluesOnly);
        if (softmin(et.eigenvalues(), beta, nullptr) > f + 1e-4 * step * gn) {
          c = trial;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
  }
  return c;
}

}  // namespace

HamiltonianStorage io_ham_storage_W(const StateSpaceSystem& sys, const Certificate& omega, const Tolerances& tol) {
  if (omega.kind != CertificateKind::IOHamiltonian) {
    throw Error(ErrorCode::KindClash, "io_ham_storage_W needs an IO-Hamiltonian certificate");
  }
  if (!verify_certificate(sys, omega, tol).valid) {
    throw Error(ErrorCode::InvalidArgument, "Omega does not certify the IO-Hamiltonian property");
  }
  if (sys.D.norm() > tol.feas_tol * (1.0 + sys.B.norm() + sys.C.norm())) {
    throw Error(ErrorCode::FeedthroughNonzero, "cyclo-passive storage is implemented for D = 0");
  }
  const Eigen::Index n = sys.n();
  const Matrix& a = sys.A;
  const Matrix& b = sys.B;

  // Equality part B^T W = C of the LMI (D = 0 forces it).
  LinearConstraintSystem lcs(n, n, SymmetryTag::Symmetric);
  lcs.add_equation([&](const Matrix& w) { return (b.transpose() * w).eval(); }, sys.C);
  const StructuredSolution sol = solve_structured(lcs, tol);
  if (sol.kind == StructuredSolution::Kind::Infeasible) {
    throw Error(ErrorCode::Indefinite, "B^T W = C has no symmetric solution").with_residual(sol.residual);
  }
  auto dissipation = [&](const Matrix& w) { return symmetric_part(-a.transpose() * w - w * a); };
  const Matrix s0 = dissipation(sol.particular);
  std::vector<Matrix> dirs;
  for (const Matrix& f : sol.family) dirs.push_back(dissipation(f));
  const double floor = -tol.feas_tol * (1.0 + s0.norm());

  Matrix w = sol.particular;
  if (n > 0 && min_eigenvalue(s0) < floor) {
    const Vector c = maximize_min_eig(s0, dirs, 0.0);
    for (std::size_t k = 0; k < dirs.size(); ++k) w += c(static_cast<Eigen::Index>(k)) * sol.family[k];
  }
  const double best = n == 0 ? 0.0 : min_eigenvalue(dissipation(w));
  if (best < -tol.feas_tol * (1.0 + dissipation(w).norm())) {
    throw Error(ErrorCode::Indefinite, "no storage satisfies the dissipation inequality").with_residual(best);
  }

  HamiltonianStorage out;
  const Matrix& om = omega.matrix;
  for (int iter = 0;; ++iter) {
    if (n > 0 && min_singular_value(w) <= tol.null_tol * std::max(1.0, w.norm())) {
      throw Error(ErrorCode::IterateSingular, "storage iterate is singular");
    }
    const Matrix mirror = symmetric_part(om * w.fullPivLu().solve(om));
    const double res = n == 0 ? 0.0 : (w - mirror).norm() / w.norm();
    out.iterations = iter;
    if (res <= 1e-9) break;
    if (iter >= 500) throw Error(ErrorCode::NoConvergence, "storage fixed point did not converge").with_residual(res);
    w = 0.5 * (w + mirror);
  }
  const double final_min = n == 0 ? 0.0 : min_eigenvalue(dissipation(w));
  if (final_min < -tol.feas_tol * (1.0 + dissipation(w).norm()) ||
      (b.transpose() * w - sys.C).norm() > tol.feas_tol * (1.0 + sys.C.norm())) {
    throw Error(ErrorCode::LmiViolated, "storage fixed point violates the dissipation inequality")
        .with_residual(final_min);
  }
  const Matrix t = om.fullPivLu().solve(w);
  out.involution_residual = (t * t - Matrix::Identity(n, n)).norm();
  out.anti_symplectic_residual = (t.transpose() * om * t + om).norm() / (1.0 + om.norm());
  if (out.involution_residual > 1e-8 || out.anti_symplectic_residual > 1e-8) {
    throw Error(ErrorCode::NotAntiSymplectic, "Omega^{-1} W is not an anti-symplectic involution")
        .with_residual(std::max(out.involution_residual, out.anti_symplectic_residual));
  }
  out.storage = make_storage(sys, w, StorageKind::Generic, false);
  const Vector& spec = out.storage.slack_spectrum;
  out.storage.lossless = spec.size() == 0 || spec.cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + lmi_slack(sys, w).norm());
  return out;
}

void add_passivity_verdicts(VerdictReport& report, const StateSpaceSystem& sys, const Tolerances& tol) {
  try {
    kyp_storage(sys, StorageObjective::Min, tol);
    report.passive = Verdict::True;
  } catch (const Error& e) {
    report.passive = e.code() == ErrorCode::NotPassive ? Verdict::False : Verdict::Unknown;
    report.notes.push_back(std::string("passive: ") + e.what());
  }
  const RelaxationVerdict rv = relaxation_test(sys, tol);
  report.relaxation = rv.is_relaxation ? Verdict::True : Verdict::False;
  if (!rv.note.empty()) report.notes.push_back("relaxation: " + rv.note);
}

}  // namespace symlti
