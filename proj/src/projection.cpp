#include "leanreg/projection.hpp"

#include <string>

#include "leanreg/error.hpp"

namespace leanreg {

Dataset::Dataset(Matrix x, Vector y, bool intercept)
    : x_(std::move(x)), y_(std::move(y)), intercept_(intercept) {
  if (x_.rows() != y_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "x has " + std::to_string(x_.rows()) +
                                                  " rows but y has " + std::to_string(y_.size()));
  }
  if (x_.cols() < 1) throw Error(ErrorKind::DimensionMismatch, "at least one covariate column required");
  if (x_.rows() < x_.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "n = " + std::to_string(x_.rows()) +
                                                  " is smaller than d = " + std::to_string(x_.cols()));
  }
  if (!x_.allFinite() || !y_.allFinite()) throw Error(ErrorKind::NonFinite, "dataset has NaN or Inf entries");
  if (intercept_ && !(x_.col(0).array() == 1.0).all()) {
    throw Error(ErrorKind::InvalidArgument, "intercept column is not all ones");
  }
}

Dataset Dataset::from_covariates(const Matrix& covariates, Vector y, bool intercept) {
  if (!intercept) return Dataset(covariates, std::move(y), false);
  Matrix x(covariates.rows(), covariates.cols() + 1);
  x.col(0).setOnes();
  x.rightCols(covariates.cols()) = covariates;
  return Dataset(std::move(x), std::move(y), true);
}

ProjectionFit fit(const Dataset& data) {
  const double n = static_cast<double>(data.n());
  const Matrix& x = data.x();

  ProjectionFit out;
  out.sigma_hat = SymMatrix(x.transpose() * x / n);
  out.gamma_hat = x.transpose() * data.y() / n;

  const auto sd = spectral(out.sigma_hat);
  const double lmax = sd.eigenvalues(0);
  const double lmin = sd.eigenvalues(sd.eigenvalues.size() - 1);
  if (!(lmax > 0.0) || lmin <= kDefaultRelTol * lmax) {
    throw Error(ErrorKind::SingularGram, "empirical Gram matrix is singular (covariates are collinear)");
  }
  out.sigma_hat_inv = sd.apply([](double l) { return 1.0 / l; });

  const Matrix& inv = out.sigma_hat_inv.matrix();
  out.beta_hat = inv * out.gamma_hat;
  // one refinement step on the normal equations
  out.beta_hat += inv * (out.gamma_hat - out.sigma_hat.matrix() * out.beta_hat);

  out.residuals = data.y() - x * out.beta_hat;
  out.scores = out.residuals.asDiagonal() * x * inv;
  out.x = x;
  return out;
}

Matrix oracle_scores(const Dataset& data, const OracleTruth& truth) {
  if (truth.sigma.dim() != data.d() || truth.beta.size() != data.d()) {
    throw Error(ErrorKind::DimensionMismatch, "oracle truth does not match dataset dimension");
  }
  const SymMatrix inv = inverse(truth.sigma);
  const Vector r = data.y() - data.x() * truth.beta;
  return r.asDiagonal() * data.x() * inv.matrix();
}

}  // namespace leanreg
