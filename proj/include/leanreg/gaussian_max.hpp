#pragma once

#include <cstdint>
#include <vector>

#include "leanreg/linalg.hpp"

namespace leanreg {

/// Law of max_j |G_j| for G ~ N(0, corr) with unit-diagonal `corr`.
struct MaxGaussSpec {
  SymMatrix corr;
  std::size_t mc_draws = 100000;
  std::uint64_t seed = 0;
};

/// Throws NonPSDCorrelation unless corr has unit diagonal (1e-12) and
/// eigenvalues >= -1e-10.
void validate(const MaxGaussSpec& spec);

/// z_{alpha/(2d)}.
double bonferroni_crit(std::size_t d, double alpha);

/// z_{(1 - (1-alpha)^{1/d})/2}; never larger than bonferroni_crit(d, alpha).
double sidak_crit(std::size_t d, double alpha);

/// Order statistic at 1-based index ceil((1 - alpha) * B) of an ascending sample.
double upper_quantile(const std::vector<double>& sorted, double alpha);

/// mc_draws samples of max_j |G_j|, sorted ascending. Sampling runs in blocks
/// whose seeds derive from (seed, block index), so the output is bit-identical
/// for any thread count.
std::vector<double> max_gauss_draws(const MaxGaussSpec& spec);

double mc_quantile(const MaxGaussSpec& spec, double alpha);

inline constexpr std::size_t kAntiConcentrationGrid = 512;

/// Monte Carlo estimate of sup_{t, eps} P(t <= max|G_j| <= t + eps) / eps over
/// a 512-point t grid on [0, max draw] and the given eps grid. An estimate,
/// not a bound.
double anti_concentration(const MaxGaussSpec& spec, const std::vector<double>& eps_grid = {0.01, 0.05, 0.1});

}  // namespace leanreg
