#include "leanreg/partial_corr.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "leanreg/error.hpp"

namespace leanreg {

namespace {

constexpr double kMinStudentizer = 1e-12;

// a_j(X_i) = (X_i - mu)^T Omega e_j / sqrt(omega_jj), all i and j at once.
Matrix standardized_precision_scores(const Matrix& x, const Vector& center, const SymMatrix& omega) {
  const Matrix centered = x.rowwise() - center.transpose();
  const Vector inv_sd = omega.diag().cwiseSqrt().cwiseInverse();
  return centered * omega.matrix() * inv_sd.asDiagonal();
}

}  // namespace

std::vector<std::pair<Eigen::Index, Eigen::Index>> pair_index(Eigen::Index d) {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) out.emplace_back(j, k);
  }
  return out;
}

Matrix partial_corr_from_precision(const SymMatrix& omega) {
  const Eigen::Index d = omega.dim();
  Matrix theta(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    theta(j, j) = 1.0;
    for (Eigen::Index k = j + 1; k < d; ++k) {
      const double v = -omega(j, k) / std::sqrt(omega(j, j) * omega(k, k));
      theta(j, k) = v;
      theta(k, j) = v;
    }
  }
  return theta;
}

PartialCorrFit pcor_fit(const Matrix& x) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (d < 2) throw Error(ErrorKind::DimensionMismatch, "partial correlations need at least two columns");
  if (n <= d) throw Error(ErrorKind::DimensionMismatch, "partial correlations need n > d");
  if (!x.allFinite()) throw Error(ErrorKind::NonFinite, "data has NaN or Inf entries");
  const double nd = static_cast<double>(n);

  PartialCorrFit out;
  out.x_bar = x.colwise().mean().transpose();
  const Matrix centered = x.rowwise() - out.x_bar.transpose();
  out.sigma_hat = SymMatrix(centered.transpose() * centered / nd);
  try {
    out.omega_hat = inverse(out.sigma_hat);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularMatrix) throw;
    throw Error(ErrorKind::SingularCovariance, "sample covariance is singular");
  }
  out.theta_hat = partial_corr_from_precision(out.omega_hat);
  out.a_hat = standardized_precision_scores(x, out.x_bar, out.omega_hat);
  out.pairs = pair_index(d);

  const Eigen::Index m = static_cast<Eigen::Index>(out.pairs.size());
  out.psi_hat.resize(n, m);
  out.zeta_hat.resize(m);
  for (Eigen::Index p = 0; p < m; ++p) {
    const auto [j, k] = out.pairs[static_cast<std::size_t>(p)];
    const auto aj = out.a_hat.col(j).array();
    const auto ak = out.a_hat.col(k).array();
    const Eigen::ArrayXd cross = aj * ak;
    const Eigen::ArrayXd squares = aj.square() + ak.square();
    const double th = out.theta_hat(j, k);
    out.psi_hat.col(p) = -(cross - cross.mean()) - 0.5 * th * (squares - squares.mean());
    out.zeta_hat(p) = std::sqrt(out.psi_hat.col(p).squaredNorm() / nd);
    if (!(out.zeta_hat(p) > kMinStudentizer)) {
      throw Error(ErrorKind::DegenerateStudentizer,
                  "studentizer of pair (" + std::to_string(j) + ", " + std::to_string(k) + ") is zero");
    }
  }
  return out;
}

Matrix oracle_pcor_scores(const Matrix& x, const OracleTruth& truth) {
  const Eigen::Index d = x.cols();
  if (truth.sigma.dim() != d || truth.mu_x.size() != d || truth.theta.rows() != d) {
    throw Error(ErrorKind::DimensionMismatch, "oracle truth does not match data dimension");
  }
  const SymMatrix omega = inverse(truth.sigma);
  const Matrix a = standardized_precision_scores(x, truth.mu_x, omega);
  const auto pairs = pair_index(d);
  Matrix psi(x.rows(), static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [j, k] = pairs[p];
    const double th = truth.theta(j, k);
    const auto aj = a.col(j).array();
    const auto ak = a.col(k).array();
    psi.col(static_cast<Eigen::Index>(p)) = -(aj * ak + th) - 0.5 * th * (aj.square() + ak.square() - 2.0);
  }
  return psi;
}

BootstrapDistribution pcor_bootstrap(const PartialCorrFit& fit, std::size_t b, std::uint64_t seed) {
  const double root_n = std::sqrt(static_cast<double>(fit.n()));
  return studentized_max_bootstrap(fit.psi_hat, fit.zeta_hat * root_n, b, seed);
}

std::vector<std::pair<Eigen::Index, Eigen::Index>> PartialCorrCI::edges() const {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
  for (const auto& iv : intervals) {
    if (iv.excludes_zero()) out.emplace_back(iv.j, iv.k);
  }
  return out;
}

PartialCorrCI pcor_ci(const PartialCorrFit& fit, Method method, double alpha, std::size_t b, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::InvalidLevel, "alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  PartialCorrCI out;
  out.method = method;
  out.level = 1.0 - alpha;
  const std::size_t m = fit.pairs.size();
  if (method == Method::Bootstrap) {
    const auto boot = pcor_bootstrap(fit, b, seed);
    out.crit = critical_value(method, m, alpha, &boot);
  } else {
    out.crit = critical_value(method, m, alpha, nullptr);
  }
  const double root_n = std::sqrt(static_cast<double>(fit.n()));
  for (std::size_t p = 0; p < m; ++p) {
    const auto [j, k] = fit.pairs[p];
    PairInterval iv;
    iv.j = j;
    iv.k = k;
    iv.estimate = fit.theta_hat(j, k);
    iv.zeta = fit.zeta_hat(static_cast<Eigen::Index>(p));
    const double half = out.crit * iv.zeta / root_n;
    iv.lower = iv.estimate - half;
    iv.upper = iv.estimate + half;
    out.intervals.push_back(iv);
  }
  return out;
}

PcorLinearization verify_pcor_linearization(const Matrix& x, const OracleTruth& truth) {
  const double n = static_cast<double>(x.rows());
  const Vector x_bar = x.colwise().mean().transpose();
  const Matrix centered = x.rowwise() - x_bar.transpose();
  const SymMatrix sigma_hat(centered.transpose() * centered / n);

  const SymMatrix w = inv_sqrt(truth.sigma);
  const Matrix whitened = w.matrix() * sigma_hat.matrix() * w.matrix() - Matrix::Identity(x.cols(), x.cols());

  PcorLinearization out;
  out.d_n_sigma = op_norm(SymMatrix(whitened));
  if (out.d_n_sigma > 0.5) {
    throw Error(ErrorKind::PreconditionViolated,
                "whitened covariance deviation " + std::to_string(out.d_n_sigma) + " exceeds 1/2");
  }
  const Vector diff = x_bar - truth.mu_x;
  out.mean_norm_sq = diff.dot(inverse(truth.sigma).matrix() * diff);

  const SymMatrix omega_hat = inverse(sigma_hat);
  const Matrix theta_hat = partial_corr_from_precision(omega_hat);
  const Matrix psi = oracle_pcor_scores(x, truth);
  const Vector psi_mean = psi.colwise().mean().transpose();
  const auto pairs = pair_index(x.cols());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [j, k] = pairs[p];
    const double e = theta_hat(j, k) - truth.theta(j, k) + psi_mean(static_cast<Eigen::Index>(p));
    out.lhs = std::max(out.lhs, std::abs(e));
  }
  const double denom = out.d_n_sigma * out.d_n_sigma + out.mean_norm_sq;
  out.ratio = denom > 0.0 ? out.lhs / denom : (out.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  return out;
}

}  // namespace leanreg
