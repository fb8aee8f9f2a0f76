#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "leanreg/confidence.hpp"
#include "leanreg/linalg.hpp"
#include "leanreg/truth.hpp"

namespace leanreg {

/// Lexicographic list of pairs (j, k), j < k. Every per-pair vector and matrix
/// column in this module follows this order.
std::vector<std::pair<Eigen::Index, Eigen::Index>> pair_index(Eigen::Index d);

struct PartialCorrFit {
  Matrix theta_hat;       // unit diagonal
  SymMatrix sigma_hat;    // centered sample covariance, denominator n
  SymMatrix omega_hat;    // sigma_hat^{-1}
  Vector x_bar;
  Matrix a_hat;           // n x d, a_hat(i, j) = a_hat_j(X_i)
  Matrix psi_hat;         // n x m, column p holds psi_hat_{jk}(X_i) for pairs[p]
  Vector zeta_hat;        // length m
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;

  Eigen::Index n() const noexcept { return a_hat.rows(); }
  Eigen::Index d() const noexcept { return a_hat.cols(); }
};

/// Throws SingularCovariance, DegenerateStudentizer, DimensionMismatch (needs
/// n > d >= 2).
PartialCorrFit pcor_fit(const Matrix& x);

/// -w_jk / sqrt(w_jj w_kk) of a precision matrix, with unit diagonal.
Matrix partial_corr_from_precision(const SymMatrix& omega);

/// Population scores psi_jk(X_i) from the true mean, covariance and theta,
/// using E[a_j a_k] = -theta_jk and E[a_j^2] = 1. Shape n x m, same pair order.
Matrix oracle_pcor_scores(const Matrix& x, const OracleTruth& truth);

/// T_b = max_{j<k} |n^{-1/2} sum_i e_i psi_hat_jk(X_i)| / zeta_hat_jk.
BootstrapDistribution pcor_bootstrap(const PartialCorrFit& fit, std::size_t b, std::uint64_t seed);

struct PairInterval {
  Eigen::Index j = 0;
  Eigen::Index k = 0;
  double estimate = 0.0;
  double zeta = 0.0;
  double lower = 0.0;
  double upper = 0.0;

  bool excludes_zero() const noexcept { return lower > 0.0 || upper < 0.0; }
};

struct PartialCorrCI {
  Method method = Method::Sidak;
  double level = 0.0;
  double crit = 0.0;
  std::vector<PairInterval> intervals;

  /// Pairs whose simultaneous interval excludes zero.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> edges() const;
};

/// theta_hat_jk +- crit * zeta_hat_jk / sqrt(n), with m = d(d-1)/2 for the
/// union-bound calibrations.
PartialCorrCI pcor_ci(const PartialCorrFit& fit, Method method, double alpha,
                      std::size_t b = kDefaultBootstrapDraws, std::uint64_t seed = 0);

struct PcorLinearization {
  double lhs = 0.0;          // max_{j<k} |theta_hat - theta + n^{-1} sum psi_jk|
  double d_n_sigma = 0.0;    // ||Sigma^{-1/2} sigma_hat Sigma^{-1/2} - I||_op
  double mean_norm_sq = 0.0; // ||x_bar - mu||^2 in the Sigma^{-1} norm
  double ratio = 0.0;        // lhs / (d_n_sigma^2 + mean_norm_sq)
};

/// Throws PreconditionViolated when d_n_sigma > 1/2.
PcorLinearization verify_pcor_linearization(const Matrix& x, const OracleTruth& truth);

}  // namespace leanreg
