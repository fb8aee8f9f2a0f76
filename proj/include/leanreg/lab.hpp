#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "leanreg/confidence.hpp"
#include "leanreg/linalg.hpp"
#include "leanreg/projection.hpp"
#include "leanreg/sandwich.hpp"
#include "leanreg/truth.hpp"

namespace leanreg::lab {

enum class Family { LinearHomoskedastic, LinearHeteroskedastic, MisspecifiedQuadratic };
enum class Target { Projection, PartialCorrelation };

std::string_view to_string(Family f);
std::string_view to_string(Target t);
Family parse_family(std::string_view name);
Target parse_target(std::string_view name);

struct ErrorLaw {
  enum class Kind { Gaussian, StudentT };
  Kind kind = Kind::Gaussian;
  double scale = 1.0;  // standard deviation of the error term
  double nu = 0.0;     // degrees of freedom, StudentT only (> 4)

  static ErrorLaw gaussian(double sigma) { return {Kind::Gaussian, sigma, 0.0}; }
  static ErrorLaw student_t(double nu, double scale = 1.0) { return {Kind::StudentT, scale, nu}; }
};

/// Data-generating process with known truth.
///
/// Covariates are N(0, R) with R equicorrelated at `rho` and unit diagonal;
/// X_1 below denotes the first non-intercept covariate. With `d` counting the
/// intercept column when `intercept` is set,
///   linear_homoskedastic:   Y = X^T beta* + e
///   linear_heteroskedastic: Y = X^T beta* + sqrt((1 + X_1^2) / 2) e
///   misspecified_quadratic: Y = X^T beta* + c (X_1^2 - 1) + e
/// where e follows `error` scaled to standard deviation `error.scale` and
/// beta* is the all-ones vector. In each family the projection parameter is
/// beta*. The partial-correlation target ignores the response entirely.
struct DGPSpec {
  std::size_t n = 200;
  std::size_t d = 5;
  Family family = Family::LinearHomoskedastic;
  ErrorLaw error = ErrorLaw::gaussian(1.0);
  double rho = 0.0;
  bool intercept = true;
  double c = 1.0;
  Target target = Target::Projection;
  std::uint64_t seed = 0;
};

/// Throws InvalidSpec.
void validate(const DGPSpec& spec);

inline constexpr std::uint64_t kOracleSeed = 0x5EEDC0FFEEULL;
inline constexpr std::size_t kOracleDraws = 1'000'000;

/// Samples replicates of a DGPSpec. The truth is computed once at
/// construction: closed form for the homoskedastic family and the partial
/// correlation target, brute-force antithetic Monte Carlo otherwise.
class Simulator {
 public:
  explicit Simulator(DGPSpec spec, std::uint64_t oracle_seed = kOracleSeed,
                     std::size_t oracle_draws = kOracleDraws);
  Simulator(DGPSpec spec, OracleTruth truth);

  const DGPSpec& spec() const noexcept { return spec_; }
  const OracleTruth& truth() const noexcept { return truth_; }

  /// Regression sample drawn from substreams of `seed`.
  Dataset sample(std::uint64_t seed) const;
  /// n x d covariate sample for the partial-correlation target.
  Matrix sample_covariates(std::uint64_t seed) const;

 private:
  Matrix draw_covariates(std::uint64_t seed, std::size_t rows) const;

  DGPSpec spec_;
  Matrix covariate_factor_;  // p x p, R = F F^T
  OracleTruth truth_;
};

std::pair<Dataset, OracleTruth> generate(const DGPSpec& spec);

/// Equicorrelation matrix (1 - rho) I + rho 1 1^T.
SymMatrix equicorrelation(std::size_t p, double rho);

struct OracleDiagnostics {
  double d_n_sigma = 0.0;       // ||Sigma^{-1/2} sigma_hat Sigma^{-1/2} - I||_op
  double kappa_n = 1.0;         // kappa(Sigma^{-1/2} V_n^{1/2})
  double lin_error_norm = 0.0;  // ||beta_hat - beta - mean psi|| in the Sigma V_n^{-1} Sigma norm
  double score_norm = 0.0;      // ||mean psi|| in the same norm
  double max_ratio_err = 0.0;   // max_j |sqrt(true cov_jj / cov_hat_jj) - 1|
  double eta_n = 0.0;
  double c_n_eta = 0.0;         // 2 kappa + 2 kappa eta + sqrt(2 log 2n)
  double max_coord_error = 0.0; // max_j |beta_hat_j - beta_j - mean psi_j| / sqrt(true cov_jj)
  double beta_norm = 0.0;       // ||beta_hat - beta|| in the weighted norm, for slack scaling

  /// kappa D / (1 - D) * score_norm, +inf when D >= 1.
  double bound() const;
  bool in_event() const;
};

/// Everything is computed from definitions with V_n = truth.v / n. When
/// `eta_n` is absent it defaults to the realized d_n_sigma * score_norm.
OracleDiagnostics oracle_diagnostics(const Dataset& data, const OracleTruth& truth, const ProjectionFit& fit,
                                     const SandwichCov& cov, std::optional<double> eta_n = std::nullopt);

inline constexpr double kInequalitySlack = 1e-8;

/// Linearization bound in the weighted Euclidean norm.
bool theorem_holds(const OracleDiagnostics& diag);
/// Max-coordinate form of the same bound.
bool corollary_holds(const OracleDiagnostics& diag);

struct ReplicateCheck {
  enum class Status { Valid, SkippedLargeDeviation, SkippedSingular };
  Status status = Status::Valid;
  bool theorem = true;
  bool corollary = true;
  bool event = false;
  double theorem_ratio = 0.0;    // lhs / bound
  double corollary_ratio = 0.0;
};

struct VerificationReport {
  std::size_t reps = 0;
  std::size_t valid = 0;
  std::size_t skipped_large_deviation = 0;
  std::size_t skipped_singular = 0;
  std::size_t theorem_violations = 0;
  std::size_t corollary_violations = 0;
  double max_theorem_ratio = 0.0;
  double max_corollary_ratio = 0.0;
  std::optional<double> eta_n;
  std::size_t event_count = 0;  // replicates inside the event at eta_n (fixed eta only)
  std::vector<ReplicateCheck> replicates;

  std::size_t violations() const noexcept { return theorem_violations + corollary_violations; }
};

VerificationReport verify_deterministic_bounds(std::size_t reps, const DGPSpec& spec,
                                               std::optional<double> eta_n = std::nullopt);
VerificationReport verify_deterministic_bounds(std::size_t reps, const Simulator& sim,
                                               std::optional<double> eta_n = std::nullopt);

struct DeltaEstimate {
  double value = 0.0;
  double noise_band = 0.0;  // 95% two-sample Kolmogorov critical value for the sample sizes used
  std::size_t reps = 0;
  std::size_t mc_draws = 0;
};

/// Kolmogorov distance between the replicate law of
/// max_j |n^{-1} sum psi_ij| / sqrt((Sigma^{-1} V_n Sigma^{-1})_jj) and Monte
/// Carlo draws of max_j |G_j| with G ~ N(0, corr(Sigma^{-1} V Sigma^{-1})).
DeltaEstimate estimate_delta_n(const DGPSpec& spec, const OracleTruth& truth, std::size_t reps,
                               std::size_t mc_draws, std::uint64_t seed);
DeltaEstimate estimate_delta_n(const Simulator& sim, std::size_t reps, std::size_t mc_draws, std::uint64_t seed);

struct CoverageRow {
  Method method = Method::Sidak;
  std::size_t covered = 0;
  std::size_t valid = 0;
  double coverage = 0.0;
  double mean_width = 0.0;    // per replicate: mean interval width over coordinates
  double median_width = 0.0;
  double mean_width_sqrt_n = 0.0;
};

struct CoverageTable {
  Target target = Target::Projection;
  double alpha = 0.0;
  std::size_t reps = 0;
  std::size_t skipped = 0;
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<CoverageRow> rows;
};

/// Empirical simultaneous coverage of the true beta (or theta for the
/// partial-correlation target) per calibration method.
CoverageTable coverage_experiment(const DGPSpec& spec, const std::vector<Method>& methods, double alpha,
                                  std::size_t reps, std::size_t b, std::uint64_t seed);
CoverageTable coverage_experiment(const Simulator& sim, const std::vector<Method>& methods, double alpha,
                                  std::size_t reps, std::size_t b, std::uint64_t seed);

}  // namespace leanreg::lab
