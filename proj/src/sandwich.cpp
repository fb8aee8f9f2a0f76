#include "leanreg/sandwich.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "leanreg/error.hpp"

namespace leanreg {

namespace {

constexpr double kOuterIdentityTol = 1e-10;
// A coordinate is degenerate when its standard error is below this fraction
// of the scale the response alone would produce.
constexpr double kDegenerateRel = 1e-10;

}  // namespace

double rel_frobenius(const Matrix& a, const Matrix& b) {
  const double denom = std::max(b.norm(), std::numeric_limits<double>::min());
  return (a - b).norm() / denom;
}

SymMatrix score_outer_cov(const ProjectionFit& fit) {
  const double n = static_cast<double>(fit.n());
  return SymMatrix(fit.scores.transpose() * fit.scores / (n * n));
}

SandwichCov sandwich_cov(const ProjectionFit& fit) {
  const double n = static_cast<double>(fit.n());
  const Matrix& x = fit.x;
  const Vector r2 = fit.residuals.cwiseAbs2();

  SandwichCov out;
  out.v_hat = SymMatrix(x.transpose() * r2.asDiagonal() * x / n);
  out.v_hat_n = SymMatrix(out.v_hat.matrix() / n);
  const Matrix& inv = fit.sigma_hat_inv.matrix();
  out.cov = SymMatrix(inv * out.v_hat_n.matrix() * inv);

  const SymMatrix alt = score_outer_cov(fit);
  const double err = rel_frobenius(out.cov.matrix(), alt.matrix());
  if (err > kOuterIdentityTol && alt.matrix().norm() > 0.0) {
    throw Error(ErrorKind::Internal, "sandwich outer-product identity violated: rel err " + std::to_string(err));
  }

  const Vector y = x * fit.beta_hat + fit.residuals;
  const double mean_y2 = y.squaredNorm() / n;
  out.std_err = out.cov.diag();
  for (Eigen::Index j = 0; j < out.std_err.size(); ++j) {
    const double scale = inv(j, j) * mean_y2 / n;
    const double var = out.std_err(j);
    if (!(var > kDegenerateRel * kDegenerateRel * scale) || !(var > 0.0)) {
      throw Error(ErrorKind::DegenerateVariance,
                  "sandwich variance of coordinate " + std::to_string(j) + " is zero (residuals vanish)");
    }
    out.std_err(j) = std::sqrt(var);
  }
  return out;
}

SymMatrix oracle_sandwich(const OracleTruth& truth) {
  const SymMatrix inv = inverse(truth.sigma);
  return SymMatrix(inv.matrix() * truth.v.matrix() * inv.matrix());
}

AssumptionDiagnostics assumption_diagnostics(const ProjectionFit& fit, const std::vector<double>& q_grid) {
  const double n = static_cast<double>(fit.n());
  AssumptionDiagnostics out;
  for (double q : q_grid) {
    const double m = fit.residuals.array().abs().pow(q).sum() / n;
    out.residual_moments.push_back({q, m});
  }

  const SymMatrix v_hat(fit.x.transpose() * fit.residuals.cwiseAbs2().asDiagonal() * fit.x / n);
  const SymMatrix v_inv = inverse(v_hat);
  const SymMatrix s_half = psd_sqrt(fit.sigma_hat);
  const auto sd = spectral(SymMatrix(s_half.matrix() * v_inv.matrix() * s_half.matrix()));
  out.eig_max = sd.eigenvalues(0);
  out.eig_min = sd.eigenvalues(sd.eigenvalues.size() - 1);
  out.kappa_hat = whitened_condition(fit.sigma_hat, v_hat);
  return out;
}

}  // namespace leanreg
