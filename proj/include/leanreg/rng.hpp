#pragma once

#include <cstdint>
#include <random>

namespace leanreg::rng {

/// One step of the SplitMix64 output function applied to `x`.
std::uint64_t mix64(std::uint64_t x);

/// Seed of substream `index` under a parent seed. Used everywhere randomness
/// is split across replicates, bootstrap draws or sampling blocks, so results
/// never depend on which thread ran which index.
std::uint64_t substream(std::uint64_t seed, std::uint64_t index);

/// Fixed tags for the second level of splitting inside one replicate.
enum class Tag : std::uint64_t {
  Data = 0x0d47a,
  Bootstrap = 0xb0075,
  Gaussian = 0x6a055,
  Oracle = 0x0ac1e,
};

inline std::uint64_t substream(std::uint64_t seed, Tag tag) {
  return substream(seed, static_cast<std::uint64_t>(tag));
}

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(mix64(seed)) {}

  double normal() { return normal_(engine_); }

  /// Student-t with `nu` degrees of freedom rescaled to unit variance (nu > 2).
  double unit_student_t(double nu);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace leanreg::rng
