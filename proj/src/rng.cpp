#include "leanreg/rng.hpp"

#include <cmath>

namespace leanreg::rng {

std::uint64_t mix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

double Stream::unit_student_t(double nu) {
  std::student_t_distribution<double> t(nu);
  return t(engine_) * std::sqrt((nu - 2.0) / nu);
}

}  // namespace leanreg::rng
