#pragma once

/// @file random.hpp
/// @brief Seeded probe generator for the randomized checks.
///
/// SplitMix64 (Steele, Lea, Flood 2014): 64-bit state, advanced by the
/// golden-ratio increment 0x9E3779B97F4A7C15 and finalized with the
/// xor-shift-multiply mix below. Uniform doubles take the top 53 bits.
/// The algorithm is fixed so reports reproduce across platforms.

#include <cstdint>
#include <vector>

#include "jacobiflow/fields.hpp"
#include "jacobiflow/vec.hpp"

namespace jacobiflow {

class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Vec<double> vec(std::size_t m, double lo, double hi) {
    Vec<double> v(m);
    for (auto &x : v)
      x = uniform(lo, hi);
    return v;
  }

  /// Independent stream for sub-task `index`, so results do not depend on
  /// the order in which sub-tasks run.
  SplitMix64 fork(std::uint64_t index) const {
    SplitMix64 g(state_ ^ (0xD1B54A32D192ED03ULL * (index + 1)));
    g.next();
    return g;
  }

private:
  std::uint64_t state_;
};

inline PolynomialField random_polynomial_field(SplitMix64 &rng, int dim, double scale = 1.0) {
  const auto m = static_cast<std::size_t>(dim);
  PolynomialField f;
  f.dim = dim;
  f.offset = rng.vec(m, -scale, scale);
  f.linear = rng.vec(m * m, -scale, scale);
  f.quadratic = rng.vec(m * m * m, -scale, scale);
  return f;
}

inline PolynomialFunction random_polynomial_function(SplitMix64 &rng, int dim, double scale = 1.0) {
  const auto m = static_cast<std::size_t>(dim);
  PolynomialFunction h;
  h.dim = dim;
  h.offset = rng.uniform(-scale, scale);
  h.linear = rng.vec(m, -scale, scale);
  h.quadratic = rng.vec(m * m, -scale, scale);
  return h;
}

} // namespace jacobiflow
