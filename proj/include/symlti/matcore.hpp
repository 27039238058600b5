#pragma once

// Dense desk-scale (n <= 50) matrix kernel: structured linear matrix
// equations, spectral decompositions, the matrix exponential and the
// continuous-time algebraic Riccati equation.

#include <utility>
#include <vector>

#include "symlti/types.hpp"

namespace symlti {

enum class SymmetryTag { None, Symmetric, SkewSymmetric };

/// Linear equations L(X) = rhs over the entries of an unknown matrix X.
///
/// Each row is a functional over vec(X) (column-major) plus a right-hand
/// scalar. The symmetry tag restricts X to the symmetric or skew-symmetric
/// subspace; solve_structured parametrizes X by an orthonormal basis of that
/// subspace, so the effective unknown count drops to n(n+1)/2 or n(n-1)/2.
class LinearConstraintSystem {
 public:
  LinearConstraintSystem(Eigen::Index rows, Eigen::Index cols, SymmetryTag tag = SymmetryTag::None);

  /// Adds the rows map(X) = rhs, where map is linear. The coefficient rows
  /// are obtained by probing map on the unit matrices.
  template <typename LinearMap>
  void add_equation(LinearMap&& map, const Matrix& rhs) {
    Matrix probe = Matrix::Zero(rows_, cols_);
    const Eigen::Index unknowns = rows_ * cols_;
    Matrix block(rhs.size(), unknowns);
    for (Eigen::Index k = 0; k < unknowns; ++k) {
      probe.data()[k] = 1.0;
      const Matrix image = map(static_cast<const Matrix&>(probe));
      if (image.rows() != rhs.rows() || image.cols() != rhs.cols()) {
        throw Error(ErrorCode::Dimension, "constraint image and right-hand side differ in shape");
      }
      block.col(k) = Eigen::Map<const Vector>(image.data(), image.size());
      probe.data()[k] = 0.0;
    }
    append_rows(block, Eigen::Map<const Vector>(rhs.data(), rhs.size()));
  }

  /// Adds raw coefficient rows (each of length rows*cols, over vec(X)).
  void append_rows(const Matrix& coefficients, const Vector& rhs);

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  SymmetryTag tag() const { return tag_; }
  const Matrix& coefficients() const { return coefficients_; }
  const Vector& rhs() const { return rhs_; }

  /// Columns are vec() of an orthonormal basis of the admissible unknowns.
  Matrix parameter_basis() const;

 private:
  Eigen::Index rows_;
  Eigen::Index cols_;
  SymmetryTag tag_;
  Matrix coefficients_;
  Vector rhs_;
};

struct StructuredSolution {
  enum class Kind { Unique, Family, Infeasible };
  Kind kind = Kind::Infeasible;
  Matrix particular;            ///< minimum-norm least-squares solution
  std::vector<Matrix> family;   ///< basis of the homogeneous solution space
  double residual = 0.0;        ///< ||L(particular) - rhs||
  double rhs_norm = 0.0;
  Eigen::Index rank = 0;
};

Matrix solve_sylvester(const Matrix& a, const Matrix& b, const Matrix& c, const Tolerances& tol = {});
Matrix solve_lyapunov(const Matrix& a, const Matrix& w, const Tolerances& tol = {});
StructuredSolution solve_structured(const LinearConstraintSystem& system, const Tolerances& tol = {});
Matrix matrix_exponential(const Matrix& a, double t = 1.0);
/// Returns (e^{Ah}, int_0^h e^{As} ds) from one block exponential.
std::pair<Matrix, Matrix> exponential_and_integral(const Matrix& a, double h);

/// Stabilizing solution of F^T X + X F - X P X + S = 0.
Matrix solve_care(const Matrix& f, const Matrix& p, const Matrix& s, const Tolerances& tol = {});

/// Invariant-subspace Riccati solver behind solve_care. With stable=false the
/// anti-stabilizing solution (F - P X anti-Hurwitz) is returned instead. No
/// sign condition is imposed on P or S.
Matrix riccati_solution(const Matrix& f, const Matrix& p, const Matrix& s, bool stable,
                        const Tolerances& tol = {});

/// Orthonormal basis of ker M (singular values <= null_tol * sigma_max are zero).
Matrix nullspace(const Matrix& m, const Tolerances& tol = {});
Eigen::Index numerical_rank(const Matrix& m, const Tolerances& tol = {});

struct SymmetricEigen {
  Vector values;   ///< ascending
  Matrix vectors;  ///< orthonormal, column i pairs with values(i)
};
SymmetricEigen symmetric_eig(const Matrix& m, const Tolerances& tol = {});

// Small helpers shared by the modules.
CVector eigenvalues(const Matrix& a);
double spectral_abscissa(const Matrix& a);
bool is_hurwitz(const Matrix& a, const Tolerances& tol = {});
Matrix symmetric_part(const Matrix& m);
Matrix skew_part(const Matrix& m);
double asymmetry(const Matrix& m);  ///< ||M - M^T||_F
double min_singular_value(const Matrix& m);
/// Symmetric positive semidefinite square root; eigenvalues in [-clip, 0) are
/// clipped to zero (clip is relative to max(1, ||M||)), anything more negative
/// raises Indefinite.
Matrix psd_sqrt(const Matrix& m, double clip = 1e-10);

enum class Definiteness {
  PositiveDefinite,
  PositiveSemidefinite,
  NegativeDefinite,
  NegativeSemidefinite,
  Indefinite,
  Zero,
};
std::string_view to_string(Definiteness d);
/// Classifies a symmetric matrix with eigenvalue threshold rel * ||M||.
Definiteness classify_definiteness(const Matrix& m, double rel = 1e-8);
/// Smallest eigenvalue of the symmetric part.
double min_eigenvalue(const Matrix& m);
/// True if the symmetric part is PSD up to -rel * max(1, ||M||).
bool is_psd(const Matrix& m, double rel = 1e-8);

}  // namespace symlti
