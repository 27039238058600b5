#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "symlti/certify.hpp"
#include "symlti/cli/generate.hpp"

using namespace symlti;
using fixtures::mat;
using fixtures::throws_code;

namespace {

double rel(const Matrix& a, const Matrix& b) { return (a - b).norm() / b.norm(); }

double reciprocal_freq(const StateSpaceSystem& s) {
  double worst = 0.0;
  const Matrix sg = s.signature();
  for (const Complex z : frequency_samples(s.A)) {
    const CMatrix k = transfer(s, z);
    worst = std::max(worst, (sg * k - k.transpose() * sg).norm() / (1.0 + k.norm()));
  }
  return worst;
}

double hamiltonian_freq(const StateSpaceSystem& s) {
  double worst = 0.0;
  const Matrix sg = s.signature();
  for (const Complex z : frequency_samples(s.A)) {
    if ((eigenvalues(s.A).array() + z).abs().minCoeff() < 1e-6) continue;
    const CMatrix k = transfer(s, z), km = transfer(s, -z);
    worst = std::max(worst, (sg * k - km.transpose() * sg).norm() / (1.0 + k.norm() + km.norm()));
  }
  return worst;
}

/// Lossless reciprocal system: Q = I, G = diag(I_p, -I_q), A = [[0, K], [-K^T, 0]], B = [C1^T; 0].
StateSpaceSystem lossless_reciprocal(fixtures::Rng& rng, int p, int q, int m, Matrix* g_out, Matrix* q_out) {
  const int n = p + q;
  Matrix a = Matrix::Zero(n, n);
  const Matrix k = rng.randn(p, q);
  a.topRightCorner(p, q) = k;
  a.bottomLeftCorner(q, p) = -k.transpose();
  Matrix c = Matrix::Zero(m, n);
  c.leftCols(p) = rng.randn(m, p);
  Vector g0 = Vector::Ones(n);
  g0.tail(q).setConstant(-1.0);
  const Matrix t = rng.well_conditioned(n), ti = t.inverse();
  *g_out = t.transpose() * g0.asDiagonal() * t;
  *q_out = t.transpose() * t;
  return {ti * a * t, ti * c.transpose(), c * t, Matrix::Zero(m, m)};
}

}  // namespace

TEST(Reciprocal, Examples) {
  const Certificate g = find_reciprocal_G(fixtures::scalar_relaxation(), true);
  EXPECT_NEAR(g.matrix(0, 0), 1.0, 1e-12);
  EXPECT_EQ(g.definiteness, Definiteness::PositiveDefinite);
  EXPECT_LE(g.algebraic_residual, 1e-8);

  const Certificate lc = find_reciprocal_G(fixtures::lc_oscillator());
  EXPECT_LE((lc.matrix - mat({{-1, 0}, {0, 1}})).norm(), 1e-12);
  EXPECT_EQ(lc.definiteness, Definiteness::Indefinite);
  EXPECT_LE(lc.frequency_residual, 1e-8);

  const StateSpaceSystem empty{Matrix::Zero(0, 0), Matrix::Zero(0, 2), Matrix::Zero(2, 0), mat({{0, 1}, {-1, 0}})};
  EXPECT_TRUE(throws_code(ErrorCode::Infeasible, [&] { find_reciprocal_G(empty); }));
}

TEST(Reciprocal, PointMassIsReciprocalGyratorIsNot) {
  // Every minimal SISO system is reciprocal; for 1/s^2 the hand solution of
  // A^T G = G A, B^T G = C is the exchange matrix.
  const Certificate g = find_reciprocal_G(fixtures::point_mass(), true);
  EXPECT_LE((g.matrix - mat({{0, 1}, {1, 0}})).norm(), 1e-12);
  EXPECT_EQ(g.definiteness, Definiteness::Indefinite);
  EXPECT_TRUE(throws_code(ErrorCode::Infeasible, [] { find_reciprocal_G(fixtures::gyrator()); }));
}

TEST(Reciprocal, NonMinimalReportsFamily) {
  // Uncontrollable augmentation of 1/(s+1).
  const StateSpaceSystem s{mat({{-1, 0}, {0, -3}}), mat({{1}, {0}}), mat({{1, 0}}), mat({{0}})};
  try {
    find_reciprocal_G(s);
    ADD_FAILURE() << "expected NonUnique";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonUnique);
    EXPECT_EQ(e.family_dimension(), 1);
  }
  EXPECT_TRUE(throws_code(ErrorCode::NotMinimal, [&] { find_reciprocal_G(s, true); }));
}

TEST(Reciprocal, RoundTripOnGeneratedFixtures) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto doc = cli::generate_fixture(cli::FixtureKind::Reciprocal, 1 + seed % 6, 1 + seed % 3, seed);
    if (!minimality(doc.system).minimal()) continue;
    const Certificate g = find_reciprocal_G(doc.system);
    EXPECT_LE(rel(g.matrix, doc.ground_truth->matrix), 1e-8) << seed;
    EXPECT_LE(reciprocal_freq(doc.system), 1e-8) << seed;
    ++checked;
  }
  EXPECT_GE(checked, 90);
}

TEST(IOHamiltonian, Examples) {
  const Certificate om = find_io_hamiltonian_Omega(fixtures::point_mass(), true);
  EXPECT_LE((om.matrix - mat({{0, -1}, {1, 0}})).norm(), 1e-12);
  EXPECT_TRUE(throws_code(ErrorCode::Infeasible, [] { find_io_hamiltonian_Omega(fixtures::scalar_relaxation()); }));
  // The adjoint system has the same behavior under Omega: sigma K(s) = K^T(-s) sigma.
  EXPECT_LE(hamiltonian_freq(fixtures::point_mass()), 1e-12);
  EXPECT_LE(om.frequency_residual, 1e-8);
}

TEST(IOHamiltonian, RoundTripOnGeneratedFixtures) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto doc = cli::generate_fixture(cli::FixtureKind::IOHamiltonian, 2 + 2 * (seed % 3), 1 + seed % 3, seed);
    if (!minimality(doc.system).minimal()) continue;
    const Certificate om = find_io_hamiltonian_Omega(doc.system);
    EXPECT_LE(rel(om.matrix, doc.ground_truth->matrix), 1e-8) << seed;
    EXPECT_LE(hamiltonian_freq(doc.system), 1e-8) << seed;
    ++checked;
  }
  EXPECT_GE(checked, 90);
}

TEST(SignedReversal, Examples) {
  const Certificate r = find_signed_time_reversal(fixtures::lc_oscillator());
  EXPECT_LE((r.matrix - mat({{-1, 0}, {0, 1}})).norm(), 1e-12);
  EXPECT_TRUE(throws_code(ErrorCode::Infeasible, [] { find_signed_time_reversal(fixtures::scalar_relaxation()); }));
  EXPECT_TRUE(throws_code(ErrorCode::Infeasible, [] { find_signed_time_reversal(fixtures::point_mass()); }));
}

TEST(TimeReversal, Examples) {
  const Certificate r = find_time_reversal(fixtures::point_mass());
  EXPECT_LE((r.matrix - mat({{1, 0}, {0, -1}})).norm(), 1e-12);
  EXPECT_LE((r.matrix * r.matrix - Matrix::Identity(2, 2)).norm(), 1e-12);
  EXPECT_TRUE(throws_code(ErrorCode::Infeasible, [] { find_time_reversal(fixtures::lc_oscillator()); }));
}

TEST(TimeReversal, GeneratedFixturesAreInvolutions) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto doc = cli::generate_fixture(cli::FixtureKind::TimeReversible, 2 + seed % 5, 1 + seed % 3, seed);
    if (!minimality(doc.system).minimal()) continue;
    const Certificate r = find_time_reversal(doc.system);
    EXPECT_LE((r.matrix * r.matrix - Matrix::Identity(r.matrix.rows(), r.matrix.cols())).norm(), 1e-8);
    EXPECT_LE(rel(r.matrix, doc.ground_truth->matrix), 1e-8) << seed;
    ++checked;
  }
  EXPECT_GE(checked, 30);
}

TEST(CycloLossless, Examples) {
  const Certificate q = find_cyclo_lossless_Q(fixtures::lc_oscillator());
  EXPECT_LE((q.matrix - Matrix::Identity(2, 2)).norm(), 1e-12);
  EXPECT_TRUE(throws_code(ErrorCode::Infeasible, [] { find_cyclo_lossless_Q(fixtures::scalar_relaxation()); }));
  EXPECT_TRUE(throws_code(ErrorCode::Infeasible, [] { find_cyclo_lossless_Q(fixtures::scalar_relaxation(0.5)); }));
}

TEST(TwoOfThree, Examples) {
  const StateSpaceSystem pm = fixtures::point_mass();
  Certificate om{CertificateKind::IOHamiltonian, mat({{0, -1}, {1, 0}})};
  Certificate bad{CertificateKind::Reciprocal, mat({{1, 0}, {0, 0}})};
  EXPECT_TRUE(throws_code(ErrorCode::ThirdInvalid, [&] { two_of_three(pm, om, bad); }));
  EXPECT_TRUE(throws_code(ErrorCode::KindClash, [&] { two_of_three(pm, om, om); }));

  const StateSpaceSystem osc = fixtures::reversible_oscillator();
  Certificate r{CertificateKind::TimeReversible, mat({{1, 0}, {0, -1}})};
  const Certificate g = two_of_three(osc, om, r);
  EXPECT_EQ(g.kind, CertificateKind::Reciprocal);
  EXPECT_LE((g.matrix - mat({{0, 1}, {1, 0}})).norm(), 1e-14);
}

TEST(TwoOfThree, CompositionsAgree) {
  fixtures::Rng rng(91);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = fixtures::reversible_hamiltonian(rng, rng.uniform_int(1, 3), rng.uniform_int(1, 2));
    if (!minimality(f.sys).minimal()) continue;
    const Certificate om = find_io_hamiltonian_Omega(f.sys);
    const Certificate g = find_reciprocal_G(f.sys);
    const Certificate r = find_time_reversal(f.sys);
    EXPECT_LE(rel(om.matrix, f.omega), 1e-8);
    EXPECT_LE(rel(g.matrix, f.g), 1e-8);
    EXPECT_LE(rel(r.matrix, f.r), 1e-8);
    const Certificate r2 = two_of_three(f.sys, om, g);
    const Certificate om2 = two_of_three(f.sys, g, r);
    const Certificate g2 = two_of_three(f.sys, om, r);
    EXPECT_LE(rel(r2.matrix, r.matrix), 1e-8);
    EXPECT_LE(rel(om2.matrix, om.matrix), 1e-8);
    EXPECT_LE(rel(g2.matrix, g.matrix), 1e-8);
    EXPECT_LE(rel(g.matrix * om.matrix.inverse() * g.matrix, om.matrix), 1e-8);
  }
}

TEST(LosslessReciprocal, Examples) {
  const StateSpaceSystem lc = fixtures::lc_oscillator();
  const auto out = reversal_from_lossless_reciprocal(lc, find_cyclo_lossless_Q(lc), find_reciprocal_G(lc));
  EXPECT_LE((out.R.matrix - mat({{-1, 0}, {0, 1}})).norm(), 1e-12);
  EXPECT_TRUE(out.compatible);
  EXPECT_TRUE(out.d_zero);

  const StateSpaceSystem integrator{mat({{0}}), mat({{1}}), mat({{1}}), mat({{0}})};
  const auto id = reversal_from_lossless_reciprocal(integrator, find_cyclo_lossless_Q(integrator),
                                                    find_reciprocal_G(integrator));
  EXPECT_NEAR(id.R.matrix(0, 0), 1.0, 1e-12);

  Certificate foreign{CertificateKind::Reciprocal, mat({{2, 0}, {0, 1}})};
  EXPECT_TRUE(throws_code(ErrorCode::CompatibilityFailed,
                          [&] { reversal_from_lossless_reciprocal(lc, find_cyclo_lossless_Q(lc), foreign); }));
}

TEST(LosslessReciprocal, ReciprocalAndSignedReversibleImpliesLossless) {
  fixtures::Rng rng(97);
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    Matrix g0, q0;
    const StateSpaceSystem s =
        lossless_reciprocal(rng, rng.uniform_int(1, 3), rng.uniform_int(1, 3), rng.uniform_int(1, 2), &g0, &q0);
    if (!minimality(s).minimal()) continue;
    const Certificate g = find_reciprocal_G(s);
    const Certificate r = find_signed_time_reversal(s);
    const Certificate q = find_cyclo_lossless_Q(s);
    EXPECT_LE(rel(q.matrix, q0), 1e-8);
    EXPECT_LE(rel(g.matrix, g0), 1e-8);
    const auto out = reversal_from_lossless_reciprocal(s, q, g);
    EXPECT_LE(rel(out.R.matrix, r.matrix), 1e-8);
    EXPECT_TRUE(out.compatible);
    ++checked;
  }
  EXPECT_GE(checked, 20);
}

TEST(EstimateG, ScalarAndRcPair) {
  const Matrix g = estimate_G_from_io(fixtures::scalar_relaxation(), 15.0, 1e-3);
  EXPECT_NEAR(g(0, 0), 1.0, 5e-3);

  const StateSpaceSystem rc = fixtures::rc_pair();
  const Matrix alg = find_reciprocal_G(rc).matrix;
  const Matrix est = estimate_G_from_io(rc, 15.0, 1e-3);
  EXPECT_LE(rel(est, alg), 5e-3);

  const auto [x0, value] = memory_experiment(rc, Vector::Zero(2), 15.0, 1e-3);
  EXPECT_LE(x0.norm(), 1e-12);
  EXPECT_EQ(value, 0.0);

  EXPECT_TRUE(throws_code(ErrorCode::NotHurwitz, [] { estimate_G_from_io(fixtures::point_mass(), 15.0, 1e-3); }));
}

TEST(Verdicts, CertifyStructures) {
  const VerdictReport pm = certify_structures(fixtures::point_mass());
  EXPECT_EQ(pm.io_hamiltonian, Verdict::True);
  EXPECT_EQ(pm.reciprocal, Verdict::True);
  EXPECT_EQ(pm.time_reversible, Verdict::True);

  const VerdictReport lc = certify_structures(fixtures::lc_oscillator());
  EXPECT_EQ(lc.reciprocal, Verdict::True);
  EXPECT_EQ(lc.cyclo_lossless, Verdict::True);
  EXPECT_EQ(lc.signed_time_reversible, Verdict::True);
  EXPECT_EQ(lc.time_reversible, Verdict::False);

  for (const Certificate& c : lc.certificates) EXPECT_TRUE(verify_certificate(fixtures::lc_oscillator(), c).valid);
}
