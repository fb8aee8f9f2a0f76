#pragma once

#include <string>
#include <vector>

#include "leanreg/linalg.hpp"
#include "leanreg/truth.hpp"

namespace leanreg {

/// Covariates and response of a regression sample. With `intercept` set,
/// column 0 of `x` is exactly all ones.
class Dataset {
 public:
  Dataset(Matrix x, Vector y, bool intercept);

  /// Prepends an all-ones column to `covariates` when `intercept` is true.
  static Dataset from_covariates(const Matrix& covariates, Vector y, bool intercept);

  const Matrix& x() const noexcept { return x_; }
  const Vector& y() const noexcept { return y_; }
  bool intercept() const noexcept { return intercept_; }
  Eigen::Index n() const noexcept { return x_.rows(); }
  Eigen::Index d() const noexcept { return x_.cols(); }

 private:
  Matrix x_;
  Vector y_;
  bool intercept_;
};

struct ProjectionFit {
  Vector beta_hat;
  SymMatrix sigma_hat;      // n^{-1} sum X_i X_i^T
  SymMatrix sigma_hat_inv;
  Vector gamma_hat;         // n^{-1} sum X_i Y_i
  Vector residuals;         // Y_i - X_i^T beta_hat
  Matrix scores;            // row i: sigma_hat^{-1} X_i r_i
  Matrix x;                 // design the fit was computed from

  Eigen::Index n() const noexcept { return scores.rows(); }
  Eigen::Index d() const noexcept { return scores.cols(); }
};

/// OLS fit of the projection parameter through the spectral decomposition of
/// the empirical Gram matrix. Throws SingularGram.
ProjectionFit fit(const Dataset& data);

/// Scores Sigma^{-1} X_i (Y_i - X_i^T beta) under the true Gram matrix and beta.
Matrix oracle_scores(const Dataset& data, const OracleTruth& truth);

}  // namespace leanreg
