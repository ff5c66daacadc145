#include "loglap/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace loglap {

Grid build_grid(double a, double b, int n) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("build_grid: endpoints must be finite");
  if (!(b > a)) throw std::invalid_argument("build_grid: requires b > a");
  if (n < 1) throw std::invalid_argument("build_grid: requires n >= 1, got " + std::to_string(n));
  Grid g;
  g.a = a;
  g.b = b;
  g.n = n;
  g.h = (b - a) / (n + 1);
  g.nodes.resize(n);
  for (int i = 0; i < n; ++i) g.nodes[i] = a + (i + 1) * g.h;
  return g;
}

double lp_norm(const Grid& grid, const GridFunction& u, double p) {
  if (p <= 1.0) throw std::invalid_argument("lp_norm: requires p > 1");
  if (static_cast<int>(u.size()) != grid.n) throw std::invalid_argument("lp_norm: size mismatch");
  double sum = 0.0;
  for (double x : u) sum += std::pow(std::abs(x), p);
  return std::pow(grid.h * sum, 1.0 / p);
}

Grid refine_grid(const Grid& grid) { return build_grid(grid.a, grid.b, 2 * grid.n + 1); }

}  // namespace loglap
