#include "leanreg/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "leanreg/error.hpp"
#include "leanreg/gaussian_max.hpp"
#include "leanreg/rng.hpp"

namespace leanreg {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Bonferroni: return "bonferroni";
    case Method::Sidak: return "sidak";
    case Method::Bootstrap: return "bootstrap";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "bonferroni") return Method::Bonferroni;
  if (name == "sidak") return Method::Sidak;
  if (name == "bootstrap") return Method::Bootstrap;
  throw Error(ErrorKind::InvalidArgument, "unknown calibration method '" + std::string(name) + "'");
}

double BootstrapDistribution::quantile(double alpha) const {
  std::vector<double> sorted = draws;
  std::sort(sorted.begin(), sorted.end());
  return upper_quantile(sorted, alpha);
}

BootstrapDistribution studentized_max_bootstrap(const Matrix& scores, const Vector& denom, std::size_t b,
                                                std::uint64_t seed) {
  if (b < 1) throw Error(ErrorKind::InvalidArgument, "number of bootstrap draws must be at least 1");
  if (denom.size() != scores.cols()) throw Error(ErrorKind::DimensionMismatch, "denominator length mismatch");
  if (!(denom.array() > 0.0).all()) {
    throw Error(ErrorKind::DegenerateVariance, "bootstrap studentizer has a non-positive entry");
  }
  const Eigen::Index n = scores.rows();
  const Vector inv_denom = denom.cwiseInverse();
  const Matrix scores_t = scores.transpose();

  BootstrapDistribution out;
  out.b = b;
  out.seed = seed;
  out.draws.resize(b);

#pragma omp parallel for schedule(static)
  for (std::size_t draw = 0; draw < b; ++draw) {
    rng::Stream stream(rng::substream(seed, draw));
    Vector e(n);
    for (Eigen::Index i = 0; i < n; ++i) e(i) = stream.normal();
    const Vector s = scores_t * e;
    out.draws[draw] = s.cwiseAbs().cwiseProduct(inv_denom).maxCoeff();
  }
  return out;
}

BootstrapDistribution multiplier_bootstrap(const ProjectionFit& fit, const SandwichCov& cov, std::size_t b,
                                           std::uint64_t seed) {
  // Sum of estimated scores vanishes at the OLS solution; a violation means
  // the fit is broken, so it is reported instead of re-centering.
  const Vector col_sum = fit.scores.colwise().sum();
  const Vector col_abs = fit.scores.cwiseAbs().colwise().sum();
  for (Eigen::Index j = 0; j < col_sum.size(); ++j) {
    if (std::abs(col_sum(j)) > 1e-8 * std::max(col_abs(j), 1e-300)) {
      throw Error(ErrorKind::Internal, "estimated scores are not centered in coordinate " + std::to_string(j));
    }
  }
  const double n = static_cast<double>(fit.n());
  return studentized_max_bootstrap(fit.scores, cov.std_err * n, b, seed);
}

double critical_value(Method method, std::size_t m, double alpha, const BootstrapDistribution* boot) {
  switch (method) {
    case Method::Bonferroni: return bonferroni_crit(m, alpha);
    case Method::Sidak: return sidak_crit(m, alpha);
    case Method::Bootstrap:
      if (boot == nullptr) throw Error(ErrorKind::InvalidArgument, "bootstrap calibration needs draws");
      return boot->quantile(alpha);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown method");
}

SimultaneousCI ci(const ProjectionFit& fit, const SandwichCov& cov, Method method, double alpha,
                  std::size_t boot_b, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::InvalidLevel, "alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  SimultaneousCI out;
  out.method = method;
  out.level = 1.0 - alpha;
  if (method == Method::Bootstrap) {
    const auto boot = multiplier_bootstrap(fit, cov, boot_b, seed);
    out.crit = critical_value(method, static_cast<std::size_t>(fit.d()), alpha, &boot);
  } else {
    out.crit = critical_value(method, static_cast<std::size_t>(fit.d()), alpha, nullptr);
  }
  const Vector half = out.crit * cov.std_err;
  out.lower = fit.beta_hat - half;
  out.upper = fit.beta_hat + half;
  out.width = 2.0 * half;
  return out;
}

double empirical_cdf_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::EmptyInput, "Kolmogorov distance needs two non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  while (i < a.size() && j < b.size()) {
    const double t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= t) ++i;
    while (j < b.size() && b[j] <= t) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

}  // namespace leanreg
