#pragma once

#include <cstddef>
#include <optional>

#include "leanreg/linalg.hpp"

namespace leanreg {

/// Population quantities known only inside a simulation.
///
/// Regression mode uses `beta`, `sigma` (the Gram matrix E[XX^T]) and `v`
/// (E[XX^T (Y - X^T beta)^2]). Partial-correlation mode uses `mu_x`, `sigma`
/// (the covariance of X) and `theta`.
struct OracleTruth {
  enum class VSource { ClosedForm, BruteForce };

  Vector beta;
  SymMatrix sigma;
  SymMatrix v;
  Vector mu_x;
  Matrix theta;
  VSource v_source = VSource::ClosedForm;
  std::size_t v_sample_size = 0;  // brute-force draws behind `v`, 0 for closed form
};

}  // namespace leanreg
