#include "leanreg/gaussian_max.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "leanreg/error.hpp"
#include "leanreg/normal.hpp"
#include "leanreg/rng.hpp"

namespace leanreg {

namespace {

constexpr std::size_t kBlock = 4096;

void require_level(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::InvalidLevel, "alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
}

}  // namespace

void validate(const MaxGaussSpec& spec) {
  const auto& c = spec.corr;
  for (Eigen::Index j = 0; j < c.dim(); ++j) {
    if (std::abs(c(j, j) - 1.0) > 1e-12) {
      throw Error(ErrorKind::NonPSDCorrelation, "correlation diagonal entry " + std::to_string(j) + " is not 1");
    }
  }
  const auto sd = spectral(c);
  if (sd.eigenvalues(sd.eigenvalues.size() - 1) < -1e-10) {
    throw Error(ErrorKind::NonPSDCorrelation, "correlation matrix has a negative eigenvalue");
  }
  if (spec.mc_draws < 1) throw Error(ErrorKind::InvalidArgument, "mc_draws must be positive");
}

double bonferroni_crit(std::size_t d, double alpha) {
  require_level(alpha);
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "d must be positive");
  return upper_normal_quantile(alpha / (2.0 * static_cast<double>(d)));
}

double sidak_crit(std::size_t d, double alpha) {
  require_level(alpha);
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "d must be positive");
  if (d == 1) return bonferroni_crit(1, alpha);
  const double per_coord = -std::expm1(std::log1p(-alpha) / static_cast<double>(d));
  return upper_normal_quantile(per_coord / 2.0);
}

double upper_quantile(const std::vector<double>& sorted, double alpha) {
  require_level(alpha);
  if (sorted.empty()) throw Error(ErrorKind::EmptyInput, "no draws to take a quantile of");
  const double b = static_cast<double>(sorted.size());
  // guard against (1 - alpha) * B landing a rounding error above an integer
  auto k = static_cast<std::size_t>(std::ceil((1.0 - alpha) * b - 1e-9));
  k = std::clamp<std::size_t>(k, 1, sorted.size());
  return sorted[k - 1];
}

std::vector<double> max_gauss_draws(const MaxGaussSpec& spec) {
  validate(spec);
  const Eigen::Index d = spec.corr.dim();
  const auto sd = spectral(spec.corr);
  const Matrix factor =
      sd.eigenvectors * sd.eigenvalues.unaryExpr([](double l) { return l > 0.0 ? std::sqrt(l) : 0.0; }).asDiagonal();

  const std::size_t total = spec.mc_draws;
  const std::size_t blocks = (total + kBlock - 1) / kBlock;
  std::vector<double> draws(total);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t blk = 0; blk < blocks; ++blk) {
    rng::Stream stream(rng::substream(spec.seed, blk));
    const std::size_t begin = blk * kBlock;
    const std::size_t end = std::min(total, begin + kBlock);
    Vector z(d);
    for (std::size_t i = begin; i < end; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) z(j) = stream.normal();
      draws[i] = (factor * z).cwiseAbs().maxCoeff();
    }
  }
  std::sort(draws.begin(), draws.end());
  return draws;
}

double mc_quantile(const MaxGaussSpec& spec, double alpha) {
  require_level(alpha);
  return upper_quantile(max_gauss_draws(spec), alpha);
}

double anti_concentration(const MaxGaussSpec& spec, const std::vector<double>& eps_grid) {
  const auto draws = max_gauss_draws(spec);
  const double total = static_cast<double>(draws.size());
  const double top = draws.back();
  double best = 0.0;
  for (std::size_t g = 0; g < kAntiConcentrationGrid; ++g) {
    const double t = top * static_cast<double>(g) / static_cast<double>(kAntiConcentrationGrid - 1);
    const auto lo = std::lower_bound(draws.begin(), draws.end(), t);
    for (double eps : eps_grid) {
      if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps grid entries must be positive");
      const auto hi = std::upper_bound(lo, draws.end(), t + eps);
      const double mass = static_cast<double>(hi - lo) / total;
      best = std::max(best, mass / eps);
    }
  }
  return best;
}

}  // namespace leanreg
