#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "complab/numerics.hpp"
#include "doctest.h"

namespace gen {

/// Draw source for property tests. Every case gets its own seed so that a
/// failure message names the case that reproduces it.
class Source {
 public:
  explicit Source(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return rng_.uniform(lo, hi); }
  int integer(int lo, int hi) { return rng_.uniform_int(lo, hi); }
  double curvature() { return uniform(-2.0, 2.0); }
  /// Curvature from {-1, 0, 1} or a continuous draw, to exercise both the
  /// special values and generic ones.
  double mixed_curvature() {
    const int pick = integer(0, 4);
    return pick < 3 ? static_cast<double>(pick - 1) : curvature();
  }
  /// Radius strictly inside the domain of sn_k: (0, fraction * pi/sqrt(k)).
  double radius(double k, double fraction = 0.95, double flat_max = 3.0) {
    const double top = k > 0.0 ? fraction * std::numbers::pi / std::sqrt(k) : flat_max;
    return uniform(1e-3 * top, top);
  }
  double angle() { return uniform(0.0, std::numbers::pi); }

 private:
  complab::numerics::SplitMix64 rng_;
};

/// Runs body(source) for `cases` independent seeds.
template <class Body>
void for_all(int cases, std::uint64_t base_seed, Body body) {
  for (int i = 0; i < cases; ++i) {
    const std::uint64_t seed = base_seed * 1000003ULL + static_cast<std::uint64_t>(i);
    CAPTURE(seed);
    Source s(seed);
    body(s);
  }
}

}  // namespace gen
