#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "symlti/forms.hpp"

using namespace symlti;
using fixtures::mat;
using fixtures::throws_code;

namespace {

Matrix canonical_j(Eigen::Index n) {
  const Eigen::Index h = n / 2;
  Matrix j = Matrix::Zero(n, n);
  j.topRightCorner(h, h) = -Matrix::Identity(h, h);
  j.bottomLeftCorner(h, h) = Matrix::Identity(h, h);
  return j;
}

StateSpaceSystem as_system(const Realization& r) { return {r.A, r.B, r.C, r.D}; }

/// Trapezoid rule over the columns of a 1 x N row.
double trapezoid(const Vector& f, double h) { return h * (f.sum() - 0.5 * (f(0) + f(f.size() - 1))); }

/// |H(z(T)) - H(z(0)) - int ((y - Du)^T u - (Hz)^T R (Hz)) dt| for a smooth input.
double power_balance_defect(const PortHamiltonianForm& f) {
  const StateSpaceSystem z = as_system(f.realization);
  const double h = 1e-3;
  const Eigen::Index steps = 1001;
  Matrix u(z.m(), steps);
  for (Eigen::Index k = 0; k < steps; ++k)
    for (Eigen::Index j = 0; j < z.m(); ++j) u(j, k) = std::sin(3.0 * k * h + j) + 0.5;
  const Vector z0 = Vector::LinSpaced(z.n(), 0.3, -0.2);
  const Trajectory tr = simulate(z, u, z0, std::min(h, 0.1 / std::max(1.0, z.A.norm())));
  Vector integrand(steps);
  for (Eigen::Index k = 0; k < steps; ++k) {
    const Vector grad = f.hamiltonian * tr.states.col(k);
    const Vector yp = tr.outputs.col(k) - z.D * u.col(k);
    integrand(k) = yp.dot(u.col(k)) - grad.dot(f.R * grad);
  }
  auto energy = [&](Eigen::Index k) { return 0.5 * tr.states.col(k).dot(f.hamiltonian * tr.states.col(k)); };
  return std::abs(energy(steps - 1) - energy(0) - trapezoid(integrand, h));
}

}  // namespace

TEST(PseudoGradient, Examples) {
  const StateSpaceSystem r = fixtures::scalar_relaxation();
  const PseudoGradientForm pg = to_pseudo_gradient(r, find_reciprocal_G(r));
  EXPECT_NEAR(pg.P(0, 0), 1.0, 1e-12);
  EXPECT_LE(pg.reconstruction_residual, 1e-10);

  const StateSpaceSystem lc = fixtures::lc_oscillator();
  const PseudoGradientForm pl = to_pseudo_gradient(lc, find_reciprocal_G(lc));
  EXPECT_LE((pl.P - mat({{0, 1}, {1, 0}})).norm(), 1e-12);

  const Certificate corrupt{CertificateKind::Reciprocal, mat({{1, 0}, {0, 2}})};
  EXPECT_TRUE(throws_code(ErrorCode::AsymmetricP, [&] { to_pseudo_gradient(lc, corrupt); }));
}

TEST(CompatibleCoordinates, Examples) {
  const CompatibleCoordinates a = compatible_coordinates(mat({{-1, 0}, {0, 1}}), Matrix::Identity(2, 2));
  EXPECT_EQ(a.Q1.rows(), 1);
  EXPECT_NEAR(a.Q1(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(a.Q2(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(a.T(1, 0)), 1.0, 1e-12);  // +1 eigenspace of Q^{-1}G is the second axis
  EXPECT_LE(a.residual, 1e-9);

  const Matrix g = mat({{2, 0.5}, {0.5, 1}});
  const CompatibleCoordinates b = compatible_coordinates(g, g);
  EXPECT_EQ(b.Q2.rows(), 0);
  EXPECT_LE((b.T.transpose() * g * b.T - b.Q1).norm(), 1e-12);

  const CompatibleCoordinates c = compatible_coordinates(mat({{0, 2}, {2, 0}}), mat({{2, 0}, {0, 2}}));
  EXPECT_NEAR(c.Q1(0, 0), 2.0, 1e-12);
  EXPECT_NEAR(c.Q2(0, 0), 2.0, 1e-12);
  EXPECT_NEAR(std::abs(c.T(0, 0)), std::abs(c.T(1, 0)), 1e-12);
  EXPECT_LE(c.residual, 1e-9);

  EXPECT_TRUE(throws_code(ErrorCode::NotCompatible,
                          [] { compatible_coordinates(mat({{-1, 0}, {0, 1}}), 2.0 * Matrix::Identity(2, 2)); }));
}

TEST(PortHamiltonian, Examples) {
  const StateSpaceSystem r = fixtures::scalar_relaxation();
  const PortHamiltonianForm f = to_port_hamiltonian(r, find_reciprocal_G(r), mat({{1}}));
  EXPECT_NEAR(f.realization.A(0, 0), -1.0, 1e-12);
  EXPECT_NEAR(f.realization.B(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(f.realization.C(0, 0), 1.0, 1e-12);
  EXPECT_LE(f.transfer_residual, 1e-8);

  const StateSpaceSystem rc = fixtures::rc_pair();
  const Certificate g = find_reciprocal_G(rc);
  const PortHamiltonianForm fr = to_port_hamiltonian(rc, g, g.matrix);
  EXPECT_EQ(fr.Q2.rows(), 0);
  EXPECT_LE((fr.hamiltonian - g.matrix.inverse()).norm(), 1e-10 * g.matrix.inverse().norm());
  EXPECT_LE(fr.transfer_residual, 1e-8);

  const StateSpaceSystem lc = fixtures::lc_oscillator();
  const PortHamiltonianForm fl = to_port_hamiltonian(lc, find_reciprocal_G(lc), Matrix::Identity(2, 2));
  EXPECT_LE(fl.P1.norm() + fl.P2.norm(), 1e-12);
  EXPECT_NEAR(std::abs(fl.Pc(0, 0)), 1.0, 1e-12);
  EXPECT_LE(fl.transfer_residual, 1e-8);

  StateSpaceSystem signed_lc = lc;
  signed_lc.sigma(0) = -1.0;
  EXPECT_TRUE(throws_code(ErrorCode::SignatureNotIdentity,
                          [&] { to_port_hamiltonian(signed_lc, find_reciprocal_G(lc), Matrix::Identity(2, 2)); }));
}

TEST(PortHamiltonian, PowerBalance) {
  const StateSpaceSystem rc = fixtures::rc_pair();
  const Certificate g = find_reciprocal_G(rc);
  EXPECT_LE(power_balance_defect(to_port_hamiltonian(rc, g, g.matrix)), 1e-6);
  const StateSpaceSystem lc = fixtures::lc_oscillator();
  EXPECT_LE(power_balance_defect(to_port_hamiltonian(lc, find_reciprocal_G(lc), Matrix::Identity(2, 2))), 1e-6);
}

TEST(RelaxationPortForm, Examples) {
  const StateSpaceSystem r = fixtures::scalar_relaxation();
  const PortHamiltonianForm f = relaxation_port_form(r, find_reciprocal_G(r));
  EXPECT_NEAR(f.realization.A(0, 0), -1.0, 1e-12);
  EXPECT_LE(f.transfer_residual, 1e-8);

  const StateSpaceSystem integrator{mat({{0}}), mat({{0.5}}), mat({{1}}), mat({{0}})};
  const PortHamiltonianForm fi = relaxation_port_form(integrator, find_reciprocal_G(integrator));
  EXPECT_LE(fi.P1.norm(), 1e-12);
  EXPECT_LE(fi.transfer_residual, 1e-8);

  const StateSpaceSystem rc = fixtures::rc_pair();
  const PortHamiltonianForm fr = relaxation_port_form(rc, find_reciprocal_G(rc));
  EXPECT_LE(fr.transfer_residual, 1e-8);
  EXPECT_LE(power_balance_defect(fr), 1e-6);

  const StateSpaceSystem lc = fixtures::lc_oscillator();
  EXPECT_TRUE(throws_code(ErrorCode::NotRelaxation, [&] { relaxation_port_form(lc, find_reciprocal_G(lc)); }));
}

TEST(DerivativeOutput, PointMass) {
  const StateSpaceSystem pm = fixtures::point_mass();
  const Certificate om = find_io_hamiltonian_Omega(pm);
  const DerivativeOutputForm f = io_ham_to_port_ham(pm, om);
  EXPECT_LE((f.Q - mat({{0, 0}, {0, 1}})).norm(), 1e-12);
  EXPECT_LE((f.J - om.matrix.inverse()).norm(), 1e-12);
  EXPECT_LE(f.qjq_skewness, 1e-12);
  EXPECT_LE(f.cjc_skewness, 1e-12);
  EXPECT_LE(f.transfer_residual, 1e-8);

  // z equals the derivative of the simulated y, and d/dt 1/2 x^T Q x = z^T u.
  const double h = 1e-3;
  const Eigen::Index steps = 2001;
  Matrix u(1, steps);
  for (Eigen::Index k = 0; k < steps; ++k) u(0, k) = std::cos(2.0 * k * h);
  const Vector x0 = (Vector(2) << 0.2, -0.4).finished();
  const Trajectory y = simulate(pm, u, x0, h);
  const Trajectory z = simulate(as_system(f.realization), u, x0, h);
  Vector power(steps);
  for (Eigen::Index k = 0; k < steps; ++k) power(k) = z.outputs(0, k) * u(0, k);
  for (Eigen::Index k = 1; k + 1 < steps; k += 97) {
    EXPECT_NEAR((y.outputs(0, k + 1) - y.outputs(0, k - 1)) / (2.0 * h), z.outputs(0, k), 1e-6);
  }
  auto energy = [&](Eigen::Index k) { return 0.5 * z.states.col(k).dot(f.Q * z.states.col(k)); };
  EXPECT_LE(std::abs(energy(steps - 1) - energy(0) - trapezoid(power, h)), 1e-6);

  fixtures::Rng rng(5);
  const Matrix qjq = f.Q * f.J * f.Q;
  for (int k = 0; k < 100; ++k) {
    const Vector x = rng.randv(2);
    EXPECT_NEAR(x.dot(qjq * x), 0.0, 1e-12);
  }
  EXPECT_TRUE(throws_code(ErrorCode::FeedthroughNonzero, [&] {
    StateSpaceSystem d = pm;
    d.D(0, 0) = 1.0;
    io_ham_to_port_ham(d, om);
  }));
}

TEST(NonnegNormalForm, Examples) {
  const StateSpaceSystem s = fixtures::nonneg_fixture();
  const Certificate om = find_io_hamiltonian_Omega(s);
  const HamiltonianStorage w = io_ham_storage_W(s, om);
  const NormalForm f = nonneg_normal_form(s, om, w.storage.Q);
  EXPECT_LE((f.Omega - canonical_j(2)).norm(), 1e-9);
  EXPECT_LE(f.canonical_residual, 1e-9);
  EXPECT_LE(f.pattern_residual, 1e-9);
  EXPECT_LE((f.T.cwiseAbs() - Matrix::Identity(2, 2)).norm(), 1e-9);
  EXPECT_LE(transfer_deviation(as_realization(s), as_realization(f.transformed), frequency_samples(s.A)), 1e-8);
}

TEST(NonnegNormalForm, ConjugatedFixture) {
  fixtures::Rng rng(19);
  const StateSpaceSystem base = fixtures::nonneg_fixture();
  for (int trial = 0; trial < 20; ++trial) {
    const StateSpaceSystem s = transform(base, rng.well_conditioned(2));
    const Certificate om = find_io_hamiltonian_Omega(s);
    const NormalForm f = nonneg_normal_form(s, om, io_ham_storage_W(s, om).storage.Q);
    EXPECT_LE((f.Omega - canonical_j(2)).norm(), 1e-9);
    EXPECT_LE(f.pattern_residual, 1e-9);
    EXPECT_LE(transfer_deviation(as_realization(base), as_realization(f.transformed), frequency_samples(base.A)), 1e-8);
    // K(s) = -H^2 P / (s^2 - F^2 - P S) = 1 / (1 - s^2) fixes F^2 + P S = 1 and H^2 P = 1.
    EXPECT_NEAR(f.F(0, 0) * f.F(0, 0) + f.P(0, 0) * f.S(0, 0), 1.0, 1e-9);
    EXPECT_NEAR(f.H(0, 0) * f.H(0, 0) * f.P(0, 0), 1.0, 1e-9);
  }
}

TEST(SpectralFactorize, Examples) {
  const FactorizationForm f = spectral_factorize(mat({{0}}), mat({{1}}), mat({{1}}), mat({{1}}));
  EXPECT_NEAR(f.X(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(f.M.A(0, 0), -1.0, 1e-12);
  EXPECT_LE(f.identity_residual, 1e-8);
  EXPECT_TRUE(f.nonnegative_on_axis);
  for (double w : {0.01, 0.3, 1.0, 7.0}) {
    const CMatrix m = realization_transfer(f.M, Complex(0, w));
    EXPECT_NEAR(std::norm(m(0, 0)), 1.0 / (1.0 + w * w), 1e-12);
  }

  const FactorizationForm z = spectral_factorize(mat({{-2}}), mat({{4}}), mat({{0}}), mat({{3}}));
  EXPECT_NEAR(z.X(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(z.P_factor(0, 0), 2.0, 1e-12);

  EXPECT_TRUE(throws_code(ErrorCode::NotStabilizable,
                          [] { spectral_factorize(mat({{0}}), mat({{0}}), mat({{0}}), mat({{1}})); }));
}

TEST(SpectralFactorize, RandomHermitianNonnegativity) {
  fixtures::Rng rng(71);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = rng.uniform_int(1, 4), m = rng.uniform_int(1, 2);
    const Matrix f = rng.randn(k, k), g = rng.randn(k, k), r = rng.randn(k, k);
    const FactorizationForm out =
        spectral_factorize(f, g * g.transpose() + 0.1 * Matrix::Identity(k, k), r * r.transpose(), rng.randn(m, k));
    EXPECT_LE(out.riccati_residual, 1e-8) << trial;
    EXPECT_LE(out.identity_residual, 1e-8) << trial;
    EXPECT_TRUE(out.nonnegative_on_axis) << trial;
    EXPECT_TRUE(is_hurwitz(out.M.A)) << trial;
  }
}

TEST(TimeReversibleNormalForm, Examples) {
  const StateSpaceSystem pm = fixtures::point_mass();
  const Certificate om = find_io_hamiltonian_Omega(pm);
  const Certificate r = find_time_reversal(pm);
  const NormalForm f = time_reversible_normal_form(pm, om, r);
  EXPECT_NEAR(f.P(0, 0), 1.0, 1e-9);
  EXPECT_NEAR(f.Qblock(0, 0), 0.0, 1e-9);
  EXPECT_NEAR(f.Bt(0, 0), 1.0, 1e-9);
  EXPECT_LE(f.pattern_residual, 1e-9);

  const Certificate bad{CertificateKind::TimeReversible, Matrix::Identity(2, 2)};
  EXPECT_TRUE(throws_code(ErrorCode::NotAntiSymplectic, [&] { time_reversible_normal_form(pm, om, bad); }));
}

TEST(TimeReversibleNormalForm, ConstructThenRecover) {
  const StateSpaceSystem base{mat({{0, 2}, {-3, 0}}), mat({{0}, {1}}), mat({{1, 0}}), mat({{0}})};
  fixtures::Rng rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const StateSpaceSystem s = transform(base, rng.well_conditioned(2));
    const NormalForm f = time_reversible_normal_form(s, find_io_hamiltonian_Omega(s), find_time_reversal(s));
    EXPECT_LE((f.Omega - canonical_j(2)).norm(), 1e-9);
    EXPECT_LE(f.pattern_residual, 1e-9);
    EXPECT_LE(transfer_deviation(as_realization(base), as_realization(f.transformed), frequency_samples(base.A)),
              1e-8);
    // K(s) = Bt^2 P / (s^2 + P Q) pins the invariants P Q = 6 and Bt^2 P = 2.
    EXPECT_NEAR(f.P(0, 0) * f.Qblock(0, 0), 6.0, 1e-8);
    EXPECT_NEAR(f.Bt(0, 0) * f.Bt(0, 0) * f.P(0, 0), 2.0, 1e-8);
  }
}
