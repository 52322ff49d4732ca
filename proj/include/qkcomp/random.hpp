#pragma once

// Seeded generators. Bounded draws are done by rejection on raw engine output
// so that sequences are identical across standard libraries.

#include <cstdint>
#include <random>

#include "qkcomp/rational.hpp"

namespace qkcomp {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t draw = engine_();
    while (draw >= limit) draw = engine_();
    return lo + static_cast<std::int64_t>(draw % span);
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Integer in [-9, 9] over a denominator in [1, 9].
  Rational small_rational() {
    const auto num = uniform_int(-9, 9);
    const auto den = uniform_int(1, 9);
    return make_rational(static_cast<long>(num), static_cast<long>(den));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qkcomp
