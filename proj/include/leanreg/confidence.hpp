#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "leanreg/linalg.hpp"
#include "leanreg/projection.hpp"
#include "leanreg/sandwich.hpp"

namespace leanreg {

enum class Method { Bonferroni, Sidak, Bootstrap };

std::string_view to_string(Method m);
/// Throws InvalidArgument for anything but "bonferroni", "sidak", "bootstrap".
Method parse_method(std::string_view name);

inline constexpr std::size_t kDefaultBootstrapDraws = 2000;

struct SimultaneousCI {
  Method method = Method::Sidak;
  double level = 0.0;  // 1 - alpha
  double crit = 0.0;
  Vector lower;
  Vector upper;
  Vector width;
};

struct BootstrapDistribution {
  std::vector<double> draws;  // T_b, in draw order
  std::size_t b = 0;
  std::uint64_t seed = 0;

  /// (1 - alpha) quantile, order statistic ceil((1 - alpha) B).
  double quantile(double alpha) const;
};

/// Gaussian multiplier bootstrap of a studentized max:
///   T_b = max_j |sum_i e_i^(b) scores(i, j)| / denom(j),  e ~ N(0, 1) iid.
/// Draw b uses its own substream of `seed`, so results do not depend on the
/// number of threads.
BootstrapDistribution studentized_max_bootstrap(const Matrix& scores, const Vector& denom, std::size_t b,
                                                std::uint64_t seed);

/// T_b = max_j |n^{-1} sum_i e_i psi_ij| / std_err_j for the OLS scores.
BootstrapDistribution multiplier_bootstrap(const ProjectionFit& fit, const SandwichCov& cov, std::size_t b,
                                           std::uint64_t seed);

/// Critical value for a family of m studentized coordinates.
double critical_value(Method method, std::size_t m, double alpha, const BootstrapDistribution* boot);

SimultaneousCI ci(const ProjectionFit& fit, const SandwichCov& cov, Method method, double alpha,
                  std::size_t boot_b = kDefaultBootstrapDraws, std::uint64_t seed = 0);

/// Two-sample Kolmogorov distance sup_t |F_a(t) - F_b(t)|.
double empirical_cdf_distance(std::vector<double> a, std::vector<double> b);

}  // namespace leanreg
