#pragma once

#include <Eigen/Dense>

namespace leanreg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultRelTol = 1e-10;

/// Dense symmetric matrix. Construction symmetrizes the input as (A + A^T)/2,
/// which makes entry (j,k) bit-identical to entry (k,j).
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& a);

  static SymMatrix identity(Eigen::Index dim);
  static SymMatrix diagonal(const Vector& diag);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  double operator()(Eigen::Index j, Eigen::Index k) const { return m_(j, k); }
  const Matrix& matrix() const noexcept { return m_; }
  Vector diag() const { return m_.diagonal(); }

 private:
  Matrix m_;
};

struct SpectralDecomp {
  Vector eigenvalues;   // descending
  Matrix eigenvectors;  // columns match eigenvalues

  /// Q f(Lambda) Q^T for a scalar map f applied to each eigenvalue.
  template <typename F>
  SymMatrix apply(F&& f) const {
    Vector mapped = eigenvalues.unaryExpr(f);
    return SymMatrix(eigenvectors * mapped.asDiagonal() * eigenvectors.transpose());
  }
};

SpectralDecomp spectral(const SymMatrix& a);

double op_norm(const SymMatrix& a);

/// A^{-1/2}. Throws SingularMatrix when lambda_min <= rel_tol * lambda_max.
SymMatrix inv_sqrt(const SymMatrix& a, double rel_tol = kDefaultRelTol);

/// A^{-1}, same singularity rule as inv_sqrt.
SymMatrix inverse(const SymMatrix& a, double rel_tol = kDefaultRelTol);

/// A^{1/2} of a PSD matrix; eigenvalues in [-1e-10 * lambda_max, 0) are
/// treated as zero, anything more negative throws SingularMatrix.
SymMatrix psd_sqrt(const SymMatrix& a);

/// lambda_max / lambda_min of a positive definite matrix.
double condition_number(const SymMatrix& a, double rel_tol = kDefaultRelTol);

/// diag(A)^{-1/2} A diag(A)^{-1/2}; the diagonal is set to exactly 1.
SymMatrix corr_of(const SymMatrix& a);

/// kappa(A^{-1/2} B^{1/2}) for PD A and B, computed as the square root of the
/// condition number of A^{-1/2} B A^{-1/2}.
double whitened_condition(const SymMatrix& a, const SymMatrix& b);

/// x^T A x under a PSD weight, returned as sqrt.
double weighted_norm(const Vector& x, const SymMatrix& weight);

}  // namespace leanreg
