#pragma once

namespace leanreg {

/// Standard normal quantile Phi^{-1}(p) for p in (0, 1), Wichura's AS 241
/// (PPND16). Relative accuracy about 1e-16.
double normal_quantile(double p);

/// z_gamma: the (1 - gamma) quantile of the standard normal, evaluated without
/// forming 1 - gamma so small gamma keeps full precision.
double upper_normal_quantile(double gamma);

double normal_cdf(double x);

}  // namespace leanreg
