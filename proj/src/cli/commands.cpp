#include "symlti/cli/commands.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include <Eigen/Dense>

#include "symlti/forms.hpp"
#include "symlti/hankel.hpp"
#include "symlti/passivity.hpp"

namespace symlti::cli {

namespace {

Json base_report(const std::string& command, const std::string& name, const Tolerances& tol) {
  Json r;
  r["version"] = kToolVersion;
  r["command"] = command;
  r["input"] = name;
  r["tolerances"] = tolerances_json(tol);
  return r;
}

Json verdict_entry(Verdict v, const std::string& reason = "", double residual = std::nan("")) {
  Json j;
  j["verdict"] = std::string(to_string(v));
  if (!reason.empty()) j["reason"] = reason;
  if (std::isfinite(residual)) j["residual"] = residual;
  return j;
}

Json checked_certificate_json(const StateSpaceSystem& sys, const Certificate& c, const Tolerances& tol) {
  Json j = certificate_json(c);
  const CertificateCheck chk = verify_certificate(sys, c, tol);
  j["structure_residual"] = chk.structure_residual;
  j["min_singular_value"] = chk.min_singular_value;
  return j;
}

Json realization_json(const Realization& r) {
  Json j;
  j["A"] = matrix_json(r.A);
  j["B"] = matrix_json(r.B);
  j["C"] = matrix_json(r.C);
  j["D"] = matrix_json(r.D);
  return j;
}

struct PropertySpec {
  const char* name;
  CertificateKind kind;
};
constexpr PropertySpec kStructural[] = {
    {"reciprocal", CertificateKind::Reciprocal},
    {"iohamiltonian", CertificateKind::IOHamiltonian},
    {"signed-reversible", CertificateKind::SignedTimeReversible},
    {"reversible", CertificateKind::TimeReversible},
    {"lossless", CertificateKind::CycloLossless},
};

void structural_verdict(const StateSpaceSystem& sys, const PropertySpec& p, bool minimal, const Tolerances& tol,
                        Json& verdicts, Json& certificates) {
  try {
    const Certificate cert = find_certificate(sys, p.kind, tol);
    if (verify_certificate(sys, cert, tol).valid) {
      verdicts[p.name] = verdict_entry(Verdict::True, "", cert.algebraic_residual);
      certificates[p.name] = checked_certificate_json(sys, cert, tol);
    } else {
      verdicts[p.name] = verdict_entry(Verdict::Unknown, "certificate failed re-verification", cert.algebraic_residual);
    }
  } catch (const Error& e) {
    Verdict v = Verdict::Unknown;
    std::string reason = e.what();
    if (e.code() == ErrorCode::Infeasible || e.code() == ErrorCode::NotInvolution) {
      v = minimal ? Verdict::False : Verdict::Unknown;
      if (!minimal) reason += " (system is not minimal)";
    }
    verdicts[p.name] = verdict_entry(v, reason, e.residual());
  }
}

void passive_verdict(const StateSpaceSystem& sys, const Tolerances& tol, Json& verdicts, Json& certificates) {
  try {
    const StorageCertificate st = kyp_storage(sys, StorageObjective::Min, tol);
    verdicts["passive"] = verdict_entry(Verdict::True);
    Json c;
    c["kind"] = "kyp_storage";
    c["matrix"] = matrix_json(st.Q);
    c["slack_min"] = st.slack_spectrum.size() > 0 ? st.slack_spectrum(0) : 0.0;
    c["lossless"] = st.lossless;
    certificates["passive"] = c;
  } catch (const Error& e) {
    verdicts["passive"] =
        verdict_entry(e.code() == ErrorCode::NotPassive ? Verdict::False : Verdict::Unknown, e.what());
  }
}

void relaxation_verdict(const StateSpaceSystem& sys, bool minimal, const Tolerances& tol, Json& verdicts,
                        Json& certificates) {
  const RelaxationVerdict rv = relaxation_test(sys, tol);
  if (rv.is_relaxation && rv.G) {
    Certificate g = find_reciprocal_G(sys, false, tol);
    verdicts["relaxation"] = verdict_entry(Verdict::True, "", g.algebraic_residual);
    Json c = checked_certificate_json(sys, g, tol);
    c["GA_psd"] = rv.GA_psd;
    c["dissipation_slack_min"] = rv.dissipation_slack_min;
    c["passive_by_structure"] = rv.passive_by_structure;
    certificates["relaxation"] = c;
    return;
  }
  const bool sigma_fail = (sys.sigma.array() != 1.0).any();
  const Verdict v = sigma_fail || minimal ? Verdict::False : Verdict::Unknown;
  verdicts["relaxation"] = verdict_entry(v, rv.note + (sigma_fail || minimal ? "" : " (system is not minimal)"));
}

}  // namespace

Json certify_report(const SystemDocument& doc, const std::string& property, const Tolerances& tol) {
  const StateSpaceSystem& sys = doc.system;
  Json report = base_report("certify", doc.name, tol);
  report["property"] = property;
  const MinimalityReport mr = minimality(sys, tol);
  Json min;
  min["controllable"] = mr.controllable;
  min["observable"] = mr.observable;
  report["minimality"] = min;

  Json verdicts = Json::object();
  Json certificates = Json::object();
  const bool all = property == "all";
  bool known = all || property == "passive" || property == "relaxation";
  for (const PropertySpec& p : kStructural) {
    if (all || property == p.name) {
      known = true;
      structural_verdict(sys, p, mr.minimal(), tol, verdicts, certificates);
    }
  }
  if (!known) throw DocumentError("unknown property '" + property + "'");
  if (all || property == "passive") passive_verdict(sys, tol, verdicts, certificates);
  if (all || property == "relaxation") relaxation_verdict(sys, mr.minimal(), tol, verdicts, certificates);
  report["verdicts"] = verdicts;
  report["certificates"] = certificates;

  if (doc.ground_truth) {
    const CertificateCheck chk = verify_certificate(sys, *doc.ground_truth, tol);
    Json gt;
    gt["kind"] = std::string(to_string(doc.ground_truth->kind));
    gt["valid"] = chk.valid;
    gt["algebraic_residual"] = chk.algebraic_residual;
    report["ground_truth_check"] = gt;
  }
  return report;
}

namespace {

Json pseudo_gradient_blocks(const StateSpaceSystem& sys, const Tolerances& tol) {
  const Certificate g = find_reciprocal_G(sys, false, tol);
  const PseudoGradientForm pg = to_pseudo_gradient(sys, g, tol);
  Json b;
  b["G"] = matrix_json(pg.G);
  b["P"] = matrix_json(pg.P);
  b["C"] = matrix_json(pg.C);
  b["D"] = matrix_json(pg.D);
  b["sigma"] = vector_json(pg.sigma);
  b["reconstruction_residual"] = pg.reconstruction_residual;
  return b;
}

Json port_form_json(const PortHamiltonianForm& f) {
  Json b;
  b["T"] = matrix_json(f.T);
  b["J"] = matrix_json(f.J);
  b["R"] = matrix_json(f.R);
  b["Q1"] = matrix_json(f.Q1);
  b["Q2"] = matrix_json(f.Q2);
  b["P1"] = matrix_json(f.P1);
  b["P2"] = matrix_json(f.P2);
  b["Pc"] = matrix_json(f.Pc);
  b["hamiltonian"] = matrix_json(f.hamiltonian);
  b["realization"] = realization_json(f.realization);
  b["transfer_residual"] = f.transfer_residual;
  return b;
}

// Storage compatible with G: a lossless Q when it already satisfies
// Q = G Q^{-1} G, otherwise the fixed point started from the minimal storage.
Matrix compatible_storage(const StateSpaceSystem& sys, const Certificate& g, const Tolerances& tol) {
  try {
    const Certificate q = find_cyclo_lossless_Q(sys, tol);
    if (q.definiteness == Definiteness::PositiveDefinite) {
      const Matrix gap = q.matrix - g.matrix * q.matrix.inverse() * g.matrix;
      if (gap.norm() <= 1e-9 * (1.0 + q.matrix.norm())) return q.matrix;
    }
  } catch (const Error&) {
  }
  const StorageCertificate st = kyp_storage(sys, StorageObjective::Min, tol);
  return compatible_Q(sys, g, st.Q, tol).storage.Q;
}

Json port_hamiltonian_blocks(const StateSpaceSystem& sys, const Tolerances& tol) {
  const Certificate g = find_reciprocal_G(sys, false, tol);
  const Matrix q = compatible_storage(sys, g, tol);
  Json b = port_form_json(to_port_hamiltonian(sys, g, q, tol));
  b["G"] = matrix_json(g.matrix);
  b["storage"] = matrix_json(q);
  return b;
}

Json normal_form_json(const NormalForm& nf, bool nonnegative) {
  Json b;
  b["pattern"] = nonnegative ? "nonnegative" : "time_reversible";
  b["T"] = matrix_json(nf.T);
  b["Omega"] = matrix_json(nf.Omega);
  b["second"] = matrix_json(nf.second);
  if (nonnegative) {
    b["F"] = matrix_json(nf.F);
    b["P"] = matrix_json(nf.P);
    b["S"] = matrix_json(nf.S);
    b["H"] = matrix_json(nf.H);
  } else {
    b["P"] = matrix_json(nf.P);
    b["Q"] = matrix_json(nf.Qblock);
    b["Bt"] = matrix_json(nf.Bt);
  }
  b["canonical_residual"] = nf.canonical_residual;
  b["pattern_residual"] = nf.pattern_residual;
  return b;
}

class Refusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Matrix storage_or_refuse(const StateSpaceSystem& sys, const Certificate& omega, const Tolerances& tol) {
  try {
    return io_ham_storage_W(sys, omega, tol).storage.Q;
  } catch (const Error& e) {
    throw Refusal(std::string("no PSD storage: ") + e.what());
  }
}

Json factorize_blocks(const StateSpaceSystem& sys, const Tolerances& tol) {
  const Certificate omega = find_io_hamiltonian_Omega(sys, false, tol);
  const Matrix w = storage_or_refuse(sys, omega, tol);
  const NormalForm nf = nonneg_normal_form(sys, omega, w, tol);
  FactorizationForm ff;
  try {
    ff = spectral_factorize(nf.F, nf.P, nf.S, nf.H, tol);
  } catch (const Error& e) {
    throw Refusal(std::string("no factorization: ") + e.what());
  }
  Json b;
  b["W"] = matrix_json(w);
  b["normal_form"] = normal_form_json(nf, true);
  b["X"] = matrix_json(ff.X);
  b["P_factor"] = matrix_json(ff.P_factor);
  b["M"] = realization_json(ff.M);
  b["riccati_residual"] = ff.riccati_residual;
  b["identity_residual"] = ff.identity_residual;
  b["nonnegative_on_axis"] = ff.nonnegative_on_axis;
  return b;
}

Json normal_form_blocks(const StateSpaceSystem& sys, const Tolerances& tol) {
  const Certificate omega = find_io_hamiltonian_Omega(sys, false, tol);
  std::string why;
  try {
    const Matrix w = io_ham_storage_W(sys, omega, tol).storage.Q;
    Json b = normal_form_json(nonneg_normal_form(sys, omega, w, tol), true);
    b["W"] = matrix_json(w);
    return b;
  } catch (const Error& e) {
    why = e.what();
  }
  try {
    const Certificate r = find_time_reversal(sys, tol);
    return normal_form_json(time_reversible_normal_form(sys, omega, r, tol), false);
  } catch (const Error& e) {
    throw Refusal("no normal form: storage failed (" + why + "), time reversal failed (" + e.what() + ")");
  }
}

}  // namespace

Json canonicalize_report(const SystemDocument& doc, const std::string& form, const Tolerances& tol) {
  Json report = base_report("canonicalize", doc.name, tol);
  report["form"] = form;
  const StateSpaceSystem& sys = doc.system;
  Json (*builder)(const StateSpaceSystem&, const Tolerances&) = nullptr;
  if (form == "pseudo-gradient") {
    builder = pseudo_gradient_blocks;
  } else if (form == "port-hamiltonian") {
    builder = port_hamiltonian_blocks;
  } else if (form == "relaxation") {
    builder = [](const StateSpaceSystem& s, const Tolerances& t) {
      const Certificate g = find_reciprocal_G(s, false, t);
      Json b = port_form_json(relaxation_port_form(s, g, t));
      b["G"] = matrix_json(g.matrix);
      return b;
    };
  } else if (form == "factorize") {
    builder = factorize_blocks;
  } else if (form == "normal-form") {
    builder = normal_form_blocks;
  } else {
    throw DocumentError("unknown form '" + form + "'");
  }
  try {
    report["blocks"] = builder(sys, tol);
    report["status"] = "ok";
  } catch (const Refusal& r) {
    report["status"] = "refused";
    report["reason"] = r.what();
  } catch (const Error& e) {
    report["status"] = "refused";
    report["reason"] = e.what();
  }
  return report;
}

Json hankel_report(const SystemDocument& doc, double horizon, double step, const Tolerances& tol) {
  Json report = base_report("hankel", doc.name, tol);
  const StateSpaceSystem& sys = doc.system;
  if (!is_hurwitz(sys.A, tol)) {
    report["verdict"] = "unknown";
    report["reason"] = "A is not Hurwitz; the Hankel operator is not defined";
    return report;
  }
  Certificate g;
  try {
    g = find_reciprocal_G(sys, false, tol);
  } catch (const Error& e) {
    report["verdict"] = "unknown";
    report["reason"] = std::string("no reciprocity certificate: ") + e.what();
    return report;
  }
  const HankelSpectralData data = hankel_spectrum(sys, g, tol);
  report["G"] = matrix_json(g.matrix);
  report["eigenvalues"] = vector_json(data.eigenvalues);
  report["eigenvectors"] = matrix_json(data.eigvecs);
  Json gram;
  gram["controllability"] = matrix_json(data.gramians.ctrb);
  gram["observability"] = matrix_json(data.gramians.obsv);
  gram["cross"] = matrix_json(data.gramians.cross);
  report["gramians"] = gram;
  Json ident;
  ident["Z_minus_CG"] = data.identity_zcg;
  ident["Z_minus_GinvO"] = data.identity_zgo;
  ident["Z2_minus_CO"] = data.identity_z2;
  ident["imag_residual"] = data.imag_residual;
  report["identities"] = ident;

  const TimeGrid dg = default_grid(sys.A);
  const double t_end = horizon > 0.0 ? horizon : dg.horizon;
  const double h = step > 0.0 ? step : dg.step;
  // The Mercer check is quadratic in the grid size, so the grid is thinned.
  const auto full = static_cast<Eigen::Index>(std::floor(t_end / h + 1e-9)) + 1;
  const Eigen::Index stride = std::max<Eigen::Index>(1, (full + 500) / 501);
  const Eigen::Index pts = (full - 1) / stride + 1;
  Vector grid(pts);
  for (Eigen::Index k = 0; k < pts; ++k) grid(k) = static_cast<double>(k * stride) * h;
  Json gj;
  gj["horizon"] = t_end;
  gj["step"] = h;
  gj["mercer_points"] = pts;
  report["grid"] = gj;

  bool ok = data.identity_zcg <= 1e-9 && data.identity_zgo <= 1e-9 && data.identity_z2 <= 1e-9 &&
            data.imag_residual <= 1e-8;
  try {
    const Eigenfunctions ef = eigenfunctions(data, Vector::Zero(1), tol);
    const double orth = (ef.gram - Matrix::Identity(ef.gram.rows(), ef.gram.cols())).cwiseAbs().maxCoeff();
    const double mercer = mercer_residual(sys, data, grid, -1, tol);
    report["orthonormality_residual"] = orth;
    report["mercer_residual"] = mercer;
    ok = ok && orth <= 1e-9 && mercer <= 1e-8;
  } catch (const Error& e) {
    report["eigenfunctions"] = std::string("unavailable: ") + e.what();
  }
  report["verdict"] = ok ? "true" : "false";
  return report;
}

Json geometry_report(const SubspaceDocument& doc, const std::string& test, const Tolerances& tol) {
  Json report = base_report("geometry", doc.name, tol);
  report["test"] = test;
  const LinearSubspace& s = doc.subspace;
  report["n"] = s.half();
  report["dim"] = s.dim();
  report["basis"] = matrix_json(s.basis());
  const bool all = test == "all";
  if (!all && test != "lagrangian" && test != "dirac" && test != "separable" && test != "hybrid" && test != "kernel") {
    throw DocumentError("unknown geometry test '" + test + "'");
  }
  Json results = Json::object();
  if (all || test == "lagrangian") {
    Json r;
    r["verdict"] = is_lagrangian(s, tol) ? "true" : "false";
    r["companion_distance"] = subspace_distance(orthogonal_companion(s, PairingForm::Symplectic, tol), s);
    results["lagrangian"] = r;
  }
  if (all || test == "dirac") {
    Json r;
    r["verdict"] = is_dirac(s, tol) ? "true" : "false";
    r["companion_distance"] = subspace_distance(orthogonal_companion(s, PairingForm::Plus, tol), s);
    results["dirac"] = r;
  }
  if (all || test == "separable") {
    Json r;
    try {
      const SeparabilityResult sr = separable_test(s, tol);
      r["verdict"] = sr.separable ? "true" : "false";
      r["cross_pairing"] = sr.cross_pairing;
      if (sr.separable) r["K"] = matrix_json(sr.K);
      r["product_distance"] = sr.product_distance;
    } catch (const Error& e) {
      r["verdict"] = "false";
      r["reason"] = e.what();
    }
    results["separable"] = r;
  }
  if (all || test == "hybrid") {
    Json r;
    try {
      const HybridRepresentation hr = hybrid_representation(s, tol);
      r["verdict"] = hr.signature_residual <= 1e-9 ? "true" : "false";
      Json i1 = Json::array(), i2 = Json::array();
      for (Eigen::Index i : hr.i1) i1.push_back(i + 1);
      for (Eigen::Index i : hr.i2) i2.push_back(i + 1);
      r["I1"] = i1;
      r["I2"] = i2;
      r["S"] = matrix_json(hr.S);
      r["signature"] = vector_json(hr.signature);
      r["signature_residual"] = hr.signature_residual;
      r["graph_residual"] = hr.graph_residual;
    } catch (const Error& e) {
      r["verdict"] = "false";
      r["reason"] = e.what();
    }
    results["hybrid"] = r;
  }
  if (all || test == "kernel") {
    Json r;
    try {
      const KernelRepresentation kr = kernel_representation(s, tol);
      r["verdict"] = kr.skew_residual <= 1e-9 && kr.kernel_residual <= 1e-9 ? "true" : "false";
      r["F"] = matrix_json(kr.F);
      r["E"] = matrix_json(kr.E);
      r["skew_residual"] = kr.skew_residual;
      r["kernel_residual"] = kr.kernel_residual;
    } catch (const Error& e) {
      r["verdict"] = "false";
      r["reason"] = e.what();
    }
    results["kernel"] = r;
  }
  report["results"] = results;
  return report;
}

namespace {

template <typename Body>
int guarded(std::ostream& out, std::ostream& err, Body&& body) {
  try {
    out << render(body());
    return 0;
  } catch (const DocumentError& e) {
    err << "input error: " << e.what() << "\n";
  } catch (const Error& e) {
    err << "input error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "input error: " << e.what() << "\n";
  }
  return 2;
}

}  // namespace

int run_certify(const CommonOptions& opts, const std::string& property, std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&] {
    return certify_report(parse_system_document(read_json_input(opts.input)), property, opts.tol);
  });
}

int run_canonicalize(const CommonOptions& opts, const std::string& form, std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&] {
    return canonicalize_report(parse_system_document(read_json_input(opts.input)), form, opts.tol);
  });
}

int run_hankel(const CommonOptions& opts, const std::string& grid, std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&] {
    double horizon = 0.0, step = 0.0;
    if (!grid.empty()) {
      std::istringstream in(grid);
      char comma = 0;
      if (!(in >> horizon >> comma >> step) || comma != ',' || !(horizon > 0.0) || !(step > 0.0) || step > horizon) {
        throw DocumentError("--grid expects T,h with 0 < h <= T");
      }
    }
    return hankel_report(parse_system_document(read_json_input(opts.input)), horizon, step, opts.tol);
  });
}

int run_geometry(const CommonOptions& opts, const std::string& test, std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&] {
    return geometry_report(parse_subspace_document(read_json_input(opts.input)), test, opts.tol);
  });
}

int run_generate(const std::string& kind, int n, int m, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  return guarded(out, err,
                 [&] { return system_document_json(generate_fixture(parse_fixture_kind(kind), n, m, seed)); });
}

}  // namespace symlti::cli
