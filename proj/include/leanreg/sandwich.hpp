#pragma once

#include <vector>

#include "leanreg/linalg.hpp"
#include "leanreg/projection.hpp"
#include "leanreg/truth.hpp"

namespace leanreg {

/// Plug-in sandwich covariance of the OLS estimator.
struct SandwichCov {
  SymMatrix v_hat;    // n^{-1} sum X_i X_i^T r_i^2
  SymMatrix v_hat_n;  // v_hat / n
  SymMatrix cov;      // sigma_hat^{-1} v_hat_n sigma_hat^{-1}
  Vector std_err;     // sqrt(diag(cov))
};

/// Throws DegenerateVariance when some coordinate has (numerically) zero
/// residual variance, e.g. noiseless data.
SandwichCov sandwich_cov(const ProjectionFit& fit);

/// n^{-2} sum psi_i psi_i^T, the outer-product form of the same covariance.
SymMatrix score_outer_cov(const ProjectionFit& fit);

/// Relative Frobenius distance ||a - b||_F / max(||b||_F, tiny).
double rel_frobenius(const Matrix& a, const Matrix& b);

/// Sigma^{-1} V Sigma^{-1} from population quantities.
SymMatrix oracle_sandwich(const OracleTruth& truth);

struct MomentEntry {
  double q = 0.0;
  double value = 0.0;  // n^{-1} sum |r_i|^q
};

/// Empirical surrogates for the moment and eigenvalue conditions. Advisory
/// values only.
struct AssumptionDiagnostics {
  std::vector<MomentEntry> residual_moments;
  double eig_min = 0.0;  // of sigma_hat^{1/2} v_hat^{-1} sigma_hat^{1/2}
  double eig_max = 0.0;
  double kappa_hat = 0.0;  // kappa(sigma_hat^{-1/2} v_hat^{1/2})
};

AssumptionDiagnostics assumption_diagnostics(const ProjectionFit& fit, const std::vector<double>& q_grid);

}  // namespace leanreg
