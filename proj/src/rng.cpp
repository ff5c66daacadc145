#include "loglap/rng.hpp"

namespace loglap {

void smooth_pass(GridFunction& u) {
  const int n = static_cast<int>(u.size());
  GridFunction next(n);
  for (int i = 0; i < n; ++i) {
    const double left = i > 0 ? u[i - 1] : 0.0;
    const double right = i + 1 < n ? u[i + 1] : 0.0;
    next[i] = 0.25 * (left + 2.0 * u[i] + right);
  }
  u.swap(next);
}

GridFunction smoothed_gaussian(const Grid& grid, Rng& rng, int passes) {
  GridFunction u(grid.n);
  for (int i = 0; i < grid.n; ++i) u[i] = rng.normal();
  for (int s = 0; s < passes; ++s) smooth_pass(u);
  return u;
}

}  // namespace loglap
