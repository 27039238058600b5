#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "symlti/matcore.hpp"

using namespace symlti;
using fixtures::mat;

using fixtures::throws_code;

TEST(Sylvester, ScalarAndZero) {
  EXPECT_NEAR(solve_sylvester(mat({{-1}}), mat({{-1}}), mat({{-1}}))(0, 0), 0.5, 1e-15);
  EXPECT_EQ(solve_sylvester(Matrix::Identity(2, 2), Matrix::Identity(2, 2), Matrix::Zero(2, 2)).norm(), 0.0);
}

TEST(Sylvester, SpectrumOverlap) {
  const Matrix a = mat({{0, 1}, {-1, 0}});
  EXPECT_TRUE(throws_code(ErrorCode::SpectrumOverlap, [&] { solve_sylvester(a, a, -Matrix::Identity(2, 2)); }));
}

TEST(Sylvester, RandomResiduals) {
  fixtures::Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.uniform_int(1, 10), m = rng.uniform_int(1, 10);
    const Matrix a = rng.hurwitz(n), b = rng.hurwitz(m), c = rng.randn(n, m);
    const Matrix x = solve_sylvester(a, b, c);
    EXPECT_LE((a * x + x * b - c).norm(), 1e-10 * (1.0 + c.norm())) << trial;
  }
}

TEST(Lyapunov, Examples) {
  EXPECT_NEAR(solve_lyapunov(mat({{-1}}), mat({{1}}))(0, 0), 0.5, 1e-15);
  EXPECT_EQ(solve_lyapunov(mat({{-1}}), mat({{0}}))(0, 0), 0.0);
  EXPECT_TRUE(throws_code(ErrorCode::NotHurwitz,
                          [] { solve_lyapunov(mat({{0, 1}, {0, 0}}), Matrix::Identity(2, 2)); }));
}

TEST(Lyapunov, DiagonalClosedForm) {
  // X_ij = -W_ij / (l_i + l_j) for A = diag(l).
  const Vector l = (Vector(3) << -1.0, -2.5, -0.3).finished();
  fixtures::Rng rng(3);
  const Matrix w = rng.symmetric(3);
  const Matrix x = solve_lyapunov(l.asDiagonal(), w);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(x(i, j), -w(i, j) / (l(i) + l(j)), 1e-13);
}

TEST(Lyapunov, GramianIsPsd) {
  fixtures::Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.uniform_int(1, 10);
    const Matrix a = rng.hurwitz(n), b = rng.randn(n, rng.uniform_int(1, 3));
    const Matrix x = solve_lyapunov(a, b * b.transpose());
    EXPECT_LE(asymmetry(x), 1e-10 * (1.0 + x.norm()));
    EXPECT_GE(min_eigenvalue(x), -1e-10 * (1.0 + x.norm()));
    EXPECT_LE((a * x + x * a.transpose() + b * b.transpose()).norm(), 1e-10 * (1.0 + x.norm()) * (1.0 + a.norm()));
  }
}

TEST(Structured, Examples) {
  {
    LinearConstraintSystem lcs(1, 1, SymmetryTag::Symmetric);
    lcs.add_equation([](const Matrix& g) { return Matrix(-g - (-g)); }, Matrix::Zero(1, 1));
    lcs.add_equation([](const Matrix& g) { return Matrix(g); }, Matrix::Ones(1, 1));
    const StructuredSolution s = solve_structured(lcs);
    EXPECT_EQ(s.kind, StructuredSolution::Kind::Unique);
    EXPECT_NEAR(s.particular(0, 0), 1.0, 1e-15);
  }
  {
    LinearConstraintSystem lcs(1, 1);
    const StructuredSolution s = solve_structured(lcs);
    EXPECT_EQ(s.kind, StructuredSolution::Kind::Family);
    EXPECT_EQ(s.family.size(), 1u);
  }
  {
    LinearConstraintSystem lcs(1, 1);
    lcs.add_equation([](const Matrix& g) { return Matrix(g); }, Matrix::Zero(1, 1));
    lcs.add_equation([](const Matrix& g) { return Matrix(g); }, Matrix::Ones(1, 1));
    const StructuredSolution s = solve_structured(lcs);
    EXPECT_EQ(s.kind, StructuredSolution::Kind::Infeasible);
    EXPECT_NEAR(s.residual, std::sqrt(0.5), 1e-12);
  }
}

TEST(Structured, UniqueIffTrivialNullSpace) {
  // Brute-force rank of the coefficient matrix restricted to the parameter basis.
  fixtures::Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.uniform_int(1, 3);
    const int rows = rng.uniform_int(0, n * n + 2);
    LinearConstraintSystem lcs(n, n, trial % 2 ? SymmetryTag::Symmetric : SymmetryTag::None);
    Matrix coeff = rng.randn(rows, n * n);
    if (rows > 1 && trial % 3 == 0) coeff.row(rows - 1) = coeff.row(0);
    const Matrix x0 = rng.symmetric(n);
    lcs.append_rows(coeff, coeff * Eigen::Map<const Vector>(x0.data(), x0.size()));
    const StructuredSolution s = solve_structured(lcs);
    const Matrix reduced = coeff * lcs.parameter_basis();
    const bool full = Eigen::FullPivLU<Matrix>(reduced).rank() == reduced.cols();
    EXPECT_EQ(s.kind == StructuredSolution::Kind::Unique, full) << trial;
    EXPECT_NE(s.kind, StructuredSolution::Kind::Infeasible);
  }
}

TEST(Expm, Examples) {
  EXPECT_TRUE(matrix_exponential(Matrix::Zero(3, 3), 4.2).isIdentity(0.0));
  EXPECT_NEAR(matrix_exponential(mat({{-1}}), 1.0)(0, 0), 0.36787944117, 1e-11);
  EXPECT_LE((matrix_exponential(mat({{0, 1}, {0, 0}}), 2.0) - mat({{1, 2}, {0, 1}})).norm(), 1e-14);
}

TEST(Expm, SemigroupAndTaylorOracle) {
  fixtures::Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.uniform_int(1, 6);
    const Matrix a = rng.randn(n, n);
    const double t = rng.uniform(-2, 2), s = rng.uniform(-2, 2);
    const Matrix lhs = matrix_exponential(a, t + s);
    EXPECT_LE((lhs - matrix_exponential(a, t) * matrix_exponential(a, s)).norm(), 1e-9 * (1.0 + lhs.norm()));
    EXPECT_LE((matrix_exponential(a, t) - fixtures::taylor_expm(a, t)).norm(), 1e-10 * (1.0 + lhs.norm()));
  }
}

TEST(Expm, IntegralBlock) {
  const auto [e, phi] = exponential_and_integral(mat({{-2}}), 0.5);
  EXPECT_NEAR(e(0, 0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(phi(0, 0), (1.0 - std::exp(-1.0)) / 2.0, 1e-15);
}

TEST(Care, ScalarExamples) {
  EXPECT_NEAR(solve_care(mat({{0}}), mat({{1}}), mat({{1}}))(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(solve_care(mat({{-1}}), mat({{0}}), mat({{0}}))(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(solve_care(mat({{1}}), mat({{1}}), mat({{0}}))(0, 0), 2.0, 1e-12);
}

TEST(Care, RandomStabilizable) {
  fixtures::Rng rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.uniform_int(1, 6);
    const Matrix f = rng.randn(n, n);
    const Matrix bp = rng.randn(n, rng.uniform_int(1, n)), cs = rng.randn(rng.uniform_int(1, n), n);
    const Matrix p = bp * bp.transpose() + 1e-3 * Matrix::Identity(n, n);
    const Matrix s = cs.transpose() * cs;
    const Matrix x = solve_care(f, p, s);
    const Matrix res = f.transpose() * x + x * f - x * p * x + s;
    EXPECT_LE(res.norm(), 1e-8 * (1.0 + x.norm()) * (1.0 + f.norm() + p.norm() + s.norm())) << trial;
    EXPECT_TRUE(is_hurwitz(f - p * x)) << trial;
  }
}

TEST(Care, AntiStabilizingBranch) {
  // 2x - x^2 = 0: x = 2 stabilizes F - PX, x = 0 does not.
  EXPECT_NEAR(riccati_solution(mat({{1}}), mat({{1}}), mat({{0}}), true)(0, 0), 2.0, 1e-12);
  EXPECT_NEAR(riccati_solution(mat({{1}}), mat({{1}}), mat({{0}}), false)(0, 0), 0.0, 1e-12);
}

TEST(Nullspace, Examples) {
  EXPECT_EQ(nullspace(Matrix::Identity(2, 2)).cols(), 0);
  const Matrix k = nullspace(mat({{1, 1}}));
  ASSERT_EQ(k.cols(), 1);
  EXPECT_NEAR(std::abs(k(0, 0) * std::sqrt(2.0)), 1.0, 1e-14);
  EXPECT_NEAR(k(0, 0), -k(1, 0), 1e-14);
  EXPECT_LE((nullspace(Matrix::Zero(2, 2)).transpose() * nullspace(Matrix::Zero(2, 2)) - Matrix::Identity(2, 2)).norm(),
            1e-15);
}

TEST(SymmetricEig, Examples) {
  const SymmetricEigen a = symmetric_eig(mat({{2, 0}, {0, 1}}));
  EXPECT_NEAR(a.values(0), 1.0, 1e-15);
  EXPECT_NEAR(a.values(1), 2.0, 1e-15);
  const SymmetricEigen b = symmetric_eig(mat({{0, 1}, {1, 0}}));
  EXPECT_NEAR(b.values(0), -1.0, 1e-15);
  EXPECT_NEAR(b.values(1), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(b.vectors(0, 0) + b.vectors(1, 0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(b.vectors(0, 1) - b.vectors(1, 1)), 0.0, 1e-14);
  EXPECT_TRUE(throws_code(ErrorCode::NotSymmetric, [] { symmetric_eig(mat({{0, 1}, {0, 0}})); }));
}

TEST(Definiteness, Classification) {
  EXPECT_EQ(classify_definiteness(mat({{1, 0}, {0, 2}})), Definiteness::PositiveDefinite);
  EXPECT_EQ(classify_definiteness(mat({{1, 0}, {0, 0}})), Definiteness::PositiveSemidefinite);
  EXPECT_EQ(classify_definiteness(mat({{-1, 0}, {0, 1}})), Definiteness::Indefinite);
  EXPECT_EQ(classify_definiteness(mat({{-1, 0}, {0, -3}})), Definiteness::NegativeDefinite);
  EXPECT_EQ(classify_definiteness(Matrix::Zero(2, 2)), Definiteness::Zero);
}
