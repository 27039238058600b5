#include "symlti/cli/generate.hpp"

#include <random>

#include <Eigen/Dense>

namespace symlti::cli {

namespace {

struct Rng {
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  std::mt19937_64 gen;
  std::normal_distribution<double> normal;

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
  double sign() { return std::bernoulli_distribution(0.5)(gen) ? 1.0 : -1.0; }
  Matrix randn(Eigen::Index r, Eigen::Index c) {
    Matrix m(r, c);
    for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = normal(gen);
    return m;
  }
  Matrix orthogonal(Eigen::Index n) {
    Eigen::HouseholderQR<Matrix> qr(randn(n, n));
    return qr.householderQ() * Matrix::Identity(n, n);
  }
  /// U diag(d) U^T with |d_i| in [0.5, 2].
  Matrix symmetric(Eigen::Index n, bool positive) {
    Vector d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = uniform(0.5, 2.0) * (positive ? 1.0 : sign());
    const Matrix u = orthogonal(n);
    return u * d.asDiagonal() * u.transpose();
  }
  Matrix conditioned(Eigen::Index n) {
    Vector d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = uniform(0.7, 1.4);
    return orthogonal(n) * d.asDiagonal() * orthogonal(n);
  }
  Vector signature(Eigen::Index m) {
    Vector s(m);
    for (Eigen::Index i = 0; i < m; ++i) s(i) = sign();
    return s;
  }
};

Matrix sym(const Matrix& m) { return 0.5 * (m + m.transpose()); }
Matrix skew(const Matrix& m) { return 0.5 * (m - m.transpose()); }

}  // namespace

FixtureKind parse_fixture_kind(const std::string& name) {
  if (name == "reciprocal") return FixtureKind::Reciprocal;
  if (name == "iohamiltonian") return FixtureKind::IOHamiltonian;
  if (name == "relaxation") return FixtureKind::Relaxation;
  if (name == "lossless") return FixtureKind::Lossless;
  if (name == "time-reversible") return FixtureKind::TimeReversible;
  throw DocumentError("unknown fixture kind '" + name + "'");
}

std::string_view to_string(FixtureKind kind) {
  switch (kind) {
    case FixtureKind::Reciprocal: return "reciprocal";
    case FixtureKind::IOHamiltonian: return "iohamiltonian";
    case FixtureKind::Relaxation: return "relaxation";
    case FixtureKind::Lossless: return "lossless";
    case FixtureKind::TimeReversible: return "time-reversible";
  }
  return "unknown";
}

CertificateKind certificate_kind(FixtureKind kind) {
  switch (kind) {
    case FixtureKind::Reciprocal:
    case FixtureKind::Relaxation: return CertificateKind::Reciprocal;
    case FixtureKind::IOHamiltonian: return CertificateKind::IOHamiltonian;
    case FixtureKind::Lossless: return CertificateKind::CycloLossless;
    case FixtureKind::TimeReversible: return CertificateKind::TimeReversible;
  }
  return CertificateKind::Reciprocal;
}

SystemDocument generate_fixture(FixtureKind kind, int n_in, int m_in, std::uint64_t seed) {
  if (n_in < 1 || n_in > 8) throw Error(ErrorCode::InvalidArgument, "n must be in 1..8");
  if (m_in < 1 || m_in > 3) throw Error(ErrorCode::InvalidArgument, "m must be in 1..3");
  const Eigen::Index n = n_in, m = m_in;
  Rng rng(seed);
  Matrix a, b, c, d, truth;
  Vector sigma = Vector::Ones(m);

  switch (kind) {
    case FixtureKind::Reciprocal: {
      // A = -G^{-1} P, shifted along G so that A is Hurwitz.
      sigma = rng.signature(m);
      truth = rng.symmetric(n, false);
      const Matrix ginv = truth.inverse();
      Matrix p = sym(rng.randn(n, n));
      const double shift = std::max(0.0, spectral_abscissa(-ginv * p)) + 0.5;
      p += shift * truth;
      a = -ginv * p;
      c = rng.randn(m, n);
      b = ginv * c.transpose() * sigma.asDiagonal();
      d = sigma.asDiagonal() * sym(rng.randn(m, m));
      break;
    }
    case FixtureKind::Relaxation: {
      truth = rng.symmetric(n, true);
      const Matrix ginv = truth.inverse();
      const Matrix r = rng.randn(n, n);
      a = -ginv * (r * r.transpose() + 0.1 * Matrix::Identity(n, n));
      c = rng.randn(m, n);
      b = ginv * c.transpose();
      const Matrix l = rng.randn(m, m);
      d = 0.5 * l * l.transpose();
      break;
    }
    case FixtureKind::Lossless: {
      truth = rng.symmetric(n, true);
      const Matrix qinv = truth.inverse();
      a = qinv * skew(rng.randn(n, n));
      c = rng.randn(m, n);
      b = qinv * c.transpose();
      d = skew(rng.randn(m, m));
      break;
    }
    case FixtureKind::IOHamiltonian: {
      if (n % 2 != 0) throw Error(ErrorCode::OddDimension, "IO-Hamiltonian fixtures need even n");
      const Eigen::Index h = n / 2;
      Matrix jc = Matrix::Zero(n, n);
      jc.topRightCorner(h, h) = -Matrix::Identity(h, h);
      jc.bottomLeftCorner(h, h) = Matrix::Identity(h, h);
      const Matrix t = rng.conditioned(n);
      truth = t.transpose() * jc * t;
      const Matrix oinv = truth.inverse();
      sigma = rng.signature(m);
      a = oinv * sym(rng.randn(n, n));
      c = rng.randn(m, n);
      b = -oinv * c.transpose() * sigma.asDiagonal();
      d = sigma.asDiagonal() * sym(rng.randn(m, m));
      break;
    }
    case FixtureKind::TimeReversible: {
      if (n < 2) throw Error(ErrorCode::InvalidArgument, "time-reversible fixtures need n >= 2");
      // Anti-diagonal blocks with respect to R0 = diag(I_p, -I_q), inputs on
      // the -1 eigenspace, outputs on the +1 eigenspace.
      const Eigen::Index p = n / 2, q = n - p;
      Matrix a0 = Matrix::Zero(n, n);
      a0.topRightCorner(p, q) = rng.randn(p, q);
      a0.bottomLeftCorner(q, p) = rng.randn(q, p);
      Matrix b0 = Matrix::Zero(n, m);
      b0.bottomRows(q) = rng.randn(q, m);
      Matrix c0 = Matrix::Zero(m, n);
      c0.leftCols(p) = rng.randn(m, p);
      Vector r0 = Vector::Ones(n);
      r0.tail(q).setConstant(-1.0);
      const Matrix t = rng.conditioned(n);
      const Matrix tinv = t.inverse();
      a = tinv * a0 * t;
      b = tinv * b0;
      c = c0 * t;
      d = rng.randn(m, m);
      truth = tinv * r0.asDiagonal() * t;
      break;
    }
  }

  SystemDocument doc;
  doc.name = std::string(to_string(kind)) + "-n" + std::to_string(n) + "-m" + std::to_string(m) + "-seed" +
             std::to_string(seed);
  doc.system = StateSpaceSystem(a, b, c, d, sigma);
  Certificate cert;
  cert.kind = certificate_kind(kind);
  cert.matrix = truth;
  cert.algebraic_residual = algebraic_residual(doc.system, cert.kind, truth);
  doc.ground_truth = cert;
  doc.metadata = Json::object();
  doc.metadata["generator"] = std::string(to_string(kind));
  doc.metadata["seed"] = seed;
  doc.metadata["n"] = n_in;
  doc.metadata["m"] = m_in;
  return doc;
}

}  // namespace symlti::cli
