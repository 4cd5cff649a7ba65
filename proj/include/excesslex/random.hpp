#pragma once

#include <cstdint>
#include <random>

namespace excesslex {

// Portable pseudo-random source: the raw 64-bit outputs of MT19937-64
// (std::mt19937_64, whose output sequence the C++ standard fixes) mapped to
// other distributions by the explicit formulas below, so a seed yields the
// same values on every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Top 53 bits scaled into [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound) by rejection of the incomplete final block.
  std::uint64_t below(std::uint64_t bound);

  // Standard normal by the Box-Muller transform (cosine branch).
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace excesslex
