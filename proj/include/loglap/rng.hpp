#pragma once

#include <cmath>
#include <cstdint>

#include "loglap/grid.hpp"

namespace loglap {

// Deterministic random stream. Explicit distribution transforms (not the
// implementation-defined std:: ones) so a (seed, recipe) pair pins every
// sampled value for the bitwise reproducibility contracts.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; draws two uniforms per call, no cached spare.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::uint64_t state_;
};

// One neighbor-averaging pass u_i <- (u_{i-1} + 2 u_i + u_{i+1}) / 4 with the
// zero exterior extension at both ends.
void smooth_pass(GridFunction& u);

// i.i.d. standard normal nodal values smoothed by `passes` averaging passes.
GridFunction smoothed_gaussian(const Grid& grid, Rng& rng, int passes = 2);

}  // namespace loglap
