#include "leanreg/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "leanreg/error.hpp"
#include "leanreg/gaussian_max.hpp"
#include "leanreg/partial_corr.hpp"
#include "leanreg/rng.hpp"

namespace leanreg::lab {

std::string_view to_string(Family f) {
  switch (f) {
    case Family::LinearHomoskedastic: return "linear_homoskedastic";
    case Family::LinearHeteroskedastic: return "linear_heteroskedastic";
    case Family::MisspecifiedQuadratic: return "misspecified_quadratic";
  }
  return "unknown";
}

std::string_view to_string(Target t) {
  return t == Target::Projection ? "projection" : "partial_correlation";
}

Family parse_family(std::string_view name) {
  if (name == "linear_homoskedastic") return Family::LinearHomoskedastic;
  if (name == "linear_heteroskedastic") return Family::LinearHeteroskedastic;
  if (name == "misspecified_quadratic") return Family::MisspecifiedQuadratic;
  throw Error(ErrorKind::InvalidSpec, "unknown DGP family '" + std::string(name) + "'");
}

Target parse_target(std::string_view name) {
  if (name == "projection") return Target::Projection;
  if (name == "partial_correlation" || name == "pcor") return Target::PartialCorrelation;
  throw Error(ErrorKind::InvalidSpec, "unknown simulation target '" + std::string(name) + "'");
}

namespace {

std::size_t covariate_dim(const DGPSpec& spec) { return spec.d - (spec.intercept ? 1 : 0); }

void invalid(const std::string& what) { throw Error(ErrorKind::InvalidSpec, what); }

double draw_error(const ErrorLaw& law, rng::Stream& stream) {
  const double e = law.kind == ErrorLaw::Kind::Gaussian ? stream.normal() : stream.unit_student_t(law.nu);
  return law.scale * e;
}

// Y - X^T beta* given the first non-intercept covariate and an error draw.
double noise_term(const DGPSpec& spec, double x1, double e) {
  switch (spec.family) {
    case Family::LinearHomoskedastic: return e;
    case Family::LinearHeteroskedastic: return std::sqrt((1.0 + x1 * x1) / 2.0) * e;
    case Family::MisspecifiedQuadratic: return spec.c * (x1 * x1 - 1.0) + e;
  }
  return e;
}

// E[r | x] and E[r^2 | x]; both depend on x only through x1 and are even in it.
std::pair<double, double> conditional_noise_moments(const DGPSpec& spec, double x1) {
  const double s2 = spec.error.scale * spec.error.scale;
  switch (spec.family) {
    case Family::LinearHomoskedastic: return {0.0, s2};
    case Family::LinearHeteroskedastic: return {0.0, (1.0 + x1 * x1) / 2.0 * s2};
    case Family::MisspecifiedQuadratic: {
      const double q = spec.c * (x1 * x1 - 1.0);
      return {q, q * q + s2};
    }
  }
  return {0.0, s2};
}

SymMatrix gram_matrix(const DGPSpec& spec, const SymMatrix& r) {
  if (!spec.intercept) return r;
  Matrix g = Matrix::Zero(static_cast<Eigen::Index>(spec.d), static_cast<Eigen::Index>(spec.d));
  g(0, 0) = 1.0;
  if (r.dim() > 0) g.bottomRightCorner(r.dim(), r.dim()) = r.matrix();
  return SymMatrix(g);
}

constexpr std::size_t kOraclePairsPerChunk = 2048;

struct OracleChunk {
  Matrix v;        // sum of X X^T r^2 over both members of each pair
  Vector xy_sum;   // sum of pair-averaged X Y
  Vector xy_sq;    // sum of squares of the same
};

}  // namespace

void validate(const DGPSpec& spec) {
  if (spec.n < 1 || spec.d < 1) invalid("n and d must be positive");
  if (spec.d > spec.n) invalid("d must not exceed n");
  if (!(spec.rho >= 0.0 && spec.rho < 1.0)) invalid("equicorrelation rho must lie in [0, 1)");
  if (!(std::isfinite(spec.error.scale) && spec.error.scale >= 0.0)) invalid("error scale must be finite and >= 0");
  if (spec.error.kind == ErrorLaw::Kind::StudentT && !(spec.error.nu > 4.0)) {
    invalid("student_t errors need nu > 4");
  }
  if (!std::isfinite(spec.c)) invalid("quadratic coefficient must be finite");
  if (spec.target == Target::PartialCorrelation) {
    if (spec.intercept) invalid("partial-correlation target takes no intercept");
    if (spec.d < 2 || spec.n <= spec.d) invalid("partial-correlation target needs n > d >= 2");
    return;
  }
  if (spec.family != Family::LinearHomoskedastic && covariate_dim(spec) < 1) {
    invalid("heteroskedastic and quadratic families need at least one non-intercept covariate");
  }
}

SymMatrix equicorrelation(std::size_t p, double rho) {
  const auto dim = static_cast<Eigen::Index>(p);
  Matrix r = Matrix::Constant(dim, dim, rho);
  r.diagonal().setOnes();
  return SymMatrix(r);
}

Simulator::Simulator(DGPSpec spec, std::uint64_t oracle_seed, std::size_t oracle_draws) : spec_(spec) {
  validate(spec_);
  const std::size_t p = covariate_dim(spec_);
  SymMatrix r;
  if (p > 0) {
    r = equicorrelation(p, spec_.rho);
    covariate_factor_ = psd_sqrt(r).matrix();
  }

  if (spec_.target == Target::PartialCorrelation) {
    truth_.sigma = r;
    truth_.mu_x = Vector::Zero(static_cast<Eigen::Index>(p));
    truth_.theta = partial_corr_from_precision(inverse(r));
    return;
  }

  const auto d = static_cast<Eigen::Index>(spec_.d);
  truth_.sigma = gram_matrix(spec_, r);
  truth_.beta = Vector::Ones(d);
  truth_.mu_x = Vector::Zero(d);
  if (spec_.intercept) truth_.mu_x(0) = 1.0;

  if (spec_.family == Family::LinearHomoskedastic) {
    truth_.v = SymMatrix(truth_.sigma.matrix() * (spec_.error.scale * spec_.error.scale));
    truth_.v_source = OracleTruth::VSource::ClosedForm;
    return;
  }

  // Antithetic pairs x and -x. The error is independent of X with variance
  // scale^2, so E[r | x] and E[r^2 | x] are taken exactly and only X is sampled.
  const std::size_t pairs = std::max<std::size_t>(1, oracle_draws / 2);
  const std::size_t chunks = (pairs + kOraclePairsPerChunk - 1) / kOraclePairsPerChunk;
  std::vector<OracleChunk> parts(chunks);
  const Eigen::Index pd = static_cast<Eigen::Index>(p);
  const Eigen::Index off = spec_.intercept ? 1 : 0;

#pragma omp parallel for schedule(dynamic)
  for (std::size_t ch = 0; ch < chunks; ++ch) {
    rng::Stream stream(rng::substream(oracle_seed, ch));
    const std::size_t begin = ch * kOraclePairsPerChunk;
    const std::size_t count = std::min(pairs, begin + kOraclePairsPerChunk) - begin;
    Matrix w(d, static_cast<Eigen::Index>(2 * count));
    OracleChunk& part = parts[ch];
    part.xy_sum = Vector::Zero(d);
    part.xy_sq = Vector::Zero(d);
    Vector z(pd);
    Vector xa(d);
    Vector xb(d);
    for (std::size_t k = 0; k < count; ++k) {
      for (Eigen::Index j = 0; j < pd; ++j) z(j) = stream.normal();
      const Vector cov_x = covariate_factor_ * z;
      if (off == 1) {
        xa(0) = 1.0;
        xb(0) = 1.0;
      }
      xa.segment(off, pd) = cov_x;
      xb.segment(off, pd) = -cov_x;
      const double x1 = cov_x(0);
      const auto [mean_r, second_r] = conditional_noise_moments(spec_, x1);
      const double root = std::sqrt(second_r);
      w.col(static_cast<Eigen::Index>(2 * k)) = xa * root;
      w.col(static_cast<Eigen::Index>(2 * k + 1)) = xb * root;
      const Vector xy = 0.5 * (xa * (xa.dot(truth_.beta) + mean_r) + xb * (xb.dot(truth_.beta) + mean_r));
      part.xy_sum += xy;
      part.xy_sq += xy.cwiseAbs2();
    }
    part.v = w * w.transpose();
  }

  Matrix v = Matrix::Zero(d, d);
  Vector xy_sum = Vector::Zero(d);
  Vector xy_sq = Vector::Zero(d);
  for (const auto& part : parts) {
    v += part.v;
    xy_sum += part.xy_sum;
    xy_sq += part.xy_sq;
  }
  const double np = static_cast<double>(pairs);
  truth_.v = SymMatrix(v / (2.0 * np));
  truth_.v_source = OracleTruth::VSource::BruteForce;
  truth_.v_sample_size = 2 * pairs;

  // E[XY] must match Sigma beta within a 4 sigma Monte Carlo band.
  const Vector mean_xy = xy_sum / np;
  const Vector target = truth_.sigma.matrix() * truth_.beta;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double var = std::max(0.0, xy_sq(j) / np - mean_xy(j) * mean_xy(j));
    const double band = 4.0 * std::sqrt(var / np) + 1e-12 * (1.0 + std::abs(target(j)));
    if (std::abs(mean_xy(j) - target(j)) > band) {
      throw Error(ErrorKind::Internal, "brute-force truth: E[XY] disagrees with Sigma beta in coordinate " +
                                           std::to_string(j));
    }
  }
}

Simulator::Simulator(DGPSpec spec, OracleTruth truth) : spec_(spec), truth_(std::move(truth)) {
  validate(spec_);
  const std::size_t p = covariate_dim(spec_);
  if (p > 0) covariate_factor_ = psd_sqrt(equicorrelation(p, spec_.rho)).matrix();
}

Matrix Simulator::draw_covariates(std::uint64_t seed, std::size_t rows) const {
  const Eigen::Index p = covariate_factor_.rows();
  rng::Stream stream(seed);
  Matrix z(static_cast<Eigen::Index>(rows), p);
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    for (Eigen::Index j = 0; j < p; ++j) z(i, j) = stream.normal();
  }
  return z * covariate_factor_;  // factor is symmetric
}

Dataset Simulator::sample(std::uint64_t seed) const {
  if (spec_.target != Target::Projection) invalid("regression samples need the projection target");
  const Matrix cov_x = draw_covariates(rng::substream(seed, rng::Tag::Data), spec_.n);
  rng::Stream errors(rng::substream(seed, rng::Tag::Oracle));
  Dataset shape = Dataset::from_covariates(cov_x, Vector::Zero(cov_x.rows()), spec_.intercept);
  Vector y = shape.x() * truth_.beta;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double x1 = cov_x.cols() > 0 ? cov_x(i, 0) : 0.0;
    y(i) += noise_term(spec_, x1, draw_error(spec_.error, errors));
  }
  return Dataset(shape.x(), std::move(y), spec_.intercept);
}

Matrix Simulator::sample_covariates(std::uint64_t seed) const {
  return draw_covariates(rng::substream(seed, rng::Tag::Data), spec_.n);
}

std::pair<Dataset, OracleTruth> generate(const DGPSpec& spec) {
  Simulator sim(spec);
  return {sim.sample(spec.seed), sim.truth()};
}

double OracleDiagnostics::bound() const {
  if (!(d_n_sigma < 1.0)) return std::numeric_limits<double>::infinity();
  return kappa_n * d_n_sigma / (1.0 - d_n_sigma) * score_norm;
}

bool OracleDiagnostics::in_event() const {
  return d_n_sigma <= 0.5 && d_n_sigma * score_norm <= eta_n && max_ratio_err <= eta_n;
}

OracleDiagnostics oracle_diagnostics(const Dataset& data, const OracleTruth& truth, const ProjectionFit& fit,
                                     const SandwichCov& cov, std::optional<double> eta_n) {
  const double n = static_cast<double>(data.n());
  const Eigen::Index d = data.d();
  OracleDiagnostics out;

  const SymMatrix w = inv_sqrt(truth.sigma);
  out.d_n_sigma =
      op_norm(SymMatrix(w.matrix() * fit.sigma_hat.matrix() * w.matrix() - Matrix::Identity(d, d)));

  const Matrix psi = oracle_scores(data, truth);
  const Vector mean_psi = psi.colwise().mean().transpose();

  // Sigma V_n^{-1} Sigma with V_n = V / n
  const SymMatrix v_inv = inverse(truth.v);
  const SymMatrix weight(n * truth.sigma.matrix() * v_inv.matrix() * truth.sigma.matrix());
  const Vector err = fit.beta_hat - truth.beta;
  const Vector lin = err - mean_psi;
  out.lin_error_norm = weighted_norm(lin, weight);
  out.score_norm = weighted_norm(mean_psi, weight);
  out.beta_norm = weighted_norm(err, weight);
  out.kappa_n = whitened_condition(truth.sigma, truth.v);

  const SymMatrix s_inv = inverse(truth.sigma);
  const Vector true_var = (s_inv.matrix() * truth.v.matrix() * s_inv.matrix()).diagonal() / n;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double hat = cov.cov(j, j);
    out.max_ratio_err = std::max(out.max_ratio_err, std::abs(std::sqrt(true_var(j) / hat) - 1.0));
    out.max_coord_error = std::max(out.max_coord_error, std::abs(lin(j)) / std::sqrt(true_var(j)));
  }

  out.eta_n = eta_n.value_or(out.d_n_sigma * out.score_norm);
  out.c_n_eta = 2.0 * out.kappa_n + 2.0 * out.kappa_n * out.eta_n + std::sqrt(2.0 * std::log(2.0 * n));
  return out;
}

namespace {

double allowed(const OracleDiagnostics& diag) {
  return diag.bound() * (1.0 + kInequalitySlack) + 1e-10 * (1.0 + diag.beta_norm);
}

template <typename F>
void for_each_replicate(std::size_t reps, F&& body) {
#pragma omp parallel for schedule(dynamic)
  for (std::size_t rep = 0; rep < reps; ++rep) body(rep);
}

}  // namespace

bool theorem_holds(const OracleDiagnostics& diag) { return diag.lin_error_norm <= allowed(diag); }

bool corollary_holds(const OracleDiagnostics& diag) { return diag.max_coord_error <= allowed(diag); }

VerificationReport verify_deterministic_bounds(std::size_t reps, const DGPSpec& spec, std::optional<double> eta_n) {
  return verify_deterministic_bounds(reps, Simulator(spec), eta_n);
}

VerificationReport verify_deterministic_bounds(std::size_t reps, const Simulator& sim, std::optional<double> eta_n) {
  if (reps < 1) throw Error(ErrorKind::InvalidArgument, "reps must be at least 1");
  VerificationReport report;
  report.reps = reps;
  report.eta_n = eta_n;
  report.replicates.resize(reps);

  for_each_replicate(reps, [&](std::size_t rep) {
    ReplicateCheck& check = report.replicates[rep];
    try {
      const Dataset data = sim.sample(rng::substream(sim.spec().seed, rep));
      const ProjectionFit f = fit(data);
      const SandwichCov cov = sandwich_cov(f);
      const OracleDiagnostics diag = oracle_diagnostics(data, sim.truth(), f, cov, eta_n);
      if (!(diag.d_n_sigma < 1.0)) {
        check.status = ReplicateCheck::Status::SkippedLargeDeviation;
        return;
      }
      const double bound = diag.bound();
      check.theorem = theorem_holds(diag);
      check.corollary = corollary_holds(diag);
      check.theorem_ratio = bound > 0.0 ? diag.lin_error_norm / bound : 0.0;
      check.corollary_ratio = bound > 0.0 ? diag.max_coord_error / bound : 0.0;
      check.event = diag.in_event();
    } catch (const Error& e) {
      if (!is_numerical(e.kind()) || e.kind() == ErrorKind::Internal) throw;
      check.status = ReplicateCheck::Status::SkippedSingular;
    }
  });

  for (const auto& check : report.replicates) {
    switch (check.status) {
      case ReplicateCheck::Status::SkippedLargeDeviation: ++report.skipped_large_deviation; continue;
      case ReplicateCheck::Status::SkippedSingular: ++report.skipped_singular; continue;
      case ReplicateCheck::Status::Valid: break;
    }
    ++report.valid;
    if (!check.theorem) ++report.theorem_violations;
    if (!check.corollary) ++report.corollary_violations;
    report.max_theorem_ratio = std::max(report.max_theorem_ratio, check.theorem_ratio);
    report.max_corollary_ratio = std::max(report.max_corollary_ratio, check.corollary_ratio);
    if (eta_n && check.event) ++report.event_count;
  }
  return report;
}

DeltaEstimate estimate_delta_n(const DGPSpec& spec, const OracleTruth& truth, std::size_t reps,
                               std::size_t mc_draws, std::uint64_t seed) {
  return estimate_delta_n(Simulator(spec, truth), reps, mc_draws, seed);
}

DeltaEstimate estimate_delta_n(const Simulator& sim, std::size_t reps, std::size_t mc_draws, std::uint64_t seed) {
  if (reps < 1 || mc_draws < 1) throw Error(ErrorKind::InvalidArgument, "reps and mc_draws must be positive");
  const OracleTruth& truth = sim.truth();
  const double n = static_cast<double>(sim.spec().n);
  const SymMatrix target_cov = oracle_sandwich(truth);
  const Vector sd = (target_cov.diag() / n).cwiseSqrt();

  std::vector<double> stats(reps);
  for_each_replicate(reps, [&](std::size_t rep) {
    const Dataset data = sim.sample(rng::substream(seed, rep));
    const Vector mean_psi = oracle_scores(data, truth).colwise().mean().transpose();
    stats[rep] = mean_psi.cwiseAbs().cwiseQuotient(sd).maxCoeff();
  });

  MaxGaussSpec gauss{corr_of(target_cov), mc_draws, rng::substream(seed, rng::Tag::Gaussian)};
  const auto draws = max_gauss_draws(gauss);

  DeltaEstimate out;
  out.value = empirical_cdf_distance(std::move(stats), draws);
  out.reps = reps;
  out.mc_draws = mc_draws;
  out.noise_band = 1.358 * std::sqrt(1.0 / static_cast<double>(reps) + 1.0 / static_cast<double>(mc_draws));
  return out;
}

CoverageTable coverage_experiment(const DGPSpec& spec, const std::vector<Method>& methods, double alpha,
                                  std::size_t reps, std::size_t b, std::uint64_t seed) {
  return coverage_experiment(Simulator(spec), methods, alpha, reps, b, seed);
}

CoverageTable coverage_experiment(const Simulator& sim, const std::vector<Method>& methods, double alpha,
                                  std::size_t reps, std::size_t b, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidLevel, "alpha must lie in (0, 1)");
  if (reps < 1) throw Error(ErrorKind::InvalidArgument, "reps must be at least 1");
  if (methods.empty()) throw Error(ErrorKind::InvalidArgument, "no calibration methods requested");

  struct Outcome {
    bool valid = false;
    std::vector<char> covered;
    std::vector<double> width;
  };
  const std::size_t m = methods.size();
  const OracleTruth& truth = sim.truth();
  const bool pcor = sim.spec().target == Target::PartialCorrelation;
  std::vector<Outcome> outcomes(reps);

  for_each_replicate(reps, [&](std::size_t rep) {
    Outcome& out = outcomes[rep];
    const std::uint64_t rep_seed = rng::substream(seed, rep);
    const std::uint64_t boot_seed = rng::substream(rep_seed, rng::Tag::Bootstrap);
    out.covered.assign(m, 0);
    out.width.assign(m, 0.0);
    try {
      if (pcor) {
        const PartialCorrFit f = pcor_fit(sim.sample_covariates(rep_seed));
        for (std::size_t k = 0; k < m; ++k) {
          const PartialCorrCI band = pcor_ci(f, methods[k], alpha, b, boot_seed);
          bool all = true;
          double total = 0.0;
          for (const auto& iv : band.intervals) {
            const double th = truth.theta(iv.j, iv.k);
            all = all && iv.lower <= th && th <= iv.upper;
            total += iv.upper - iv.lower;
          }
          out.covered[k] = all ? 1 : 0;
          out.width[k] = total / static_cast<double>(band.intervals.size());
        }
      } else {
        const Dataset data = sim.sample(rep_seed);
        const ProjectionFit f = fit(data);
        const SandwichCov cov = sandwich_cov(f);
        for (std::size_t k = 0; k < m; ++k) {
          const SimultaneousCI band = ci(f, cov, methods[k], alpha, b, boot_seed);
          const bool all = ((band.lower.array() <= truth.beta.array()) &&
                            (truth.beta.array() <= band.upper.array())).all();
          out.covered[k] = all ? 1 : 0;
          out.width[k] = band.width.mean();
        }
      }
      out.valid = true;
    } catch (const Error& e) {
      if (!is_numerical(e.kind()) || e.kind() == ErrorKind::Internal) throw;
      out.valid = false;
    }
  });

  CoverageTable table;
  table.target = sim.spec().target;
  table.alpha = alpha;
  table.reps = reps;
  table.n = sim.spec().n;
  table.d = sim.spec().d;
  const double root_n = std::sqrt(static_cast<double>(table.n));
  for (std::size_t k = 0; k < m; ++k) {
    CoverageRow row;
    row.method = methods[k];
    std::vector<double> widths;
    for (const auto& out : outcomes) {
      if (!out.valid) continue;
      ++row.valid;
      row.covered += static_cast<std::size_t>(out.covered[k]);
      widths.push_back(out.width[k]);
    }
    if (row.valid > 0) {
      row.coverage = static_cast<double>(row.covered) / static_cast<double>(row.valid);
      double sum = 0.0;
      for (double w : widths) sum += w;
      row.mean_width = sum / static_cast<double>(widths.size());
      std::sort(widths.begin(), widths.end());
      const std::size_t h = widths.size() / 2;
      row.median_width = widths.size() % 2 == 1 ? widths[h] : 0.5 * (widths[h - 1] + widths[h]);
      row.mean_width_sqrt_n = row.mean_width * root_n;
    }
    table.rows.push_back(row);
  }
  for (const auto& out : outcomes) {
    if (!out.valid) ++table.skipped;
  }
  return table;
}

}  // namespace leanreg::lab
