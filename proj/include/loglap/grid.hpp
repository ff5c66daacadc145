#pragma once

#include <vector>

namespace loglap {

// Uniform discretization of a bounded interval Omega = (a, b).
// The n interior nodes are the centers of cells of width h = (b - a) / (n + 1);
// discrete functions are piecewise constant per cell and extended by zero
// outside Omega.
struct Grid {
  double a = 0.0;
  double b = 1.0;
  int n = 0;
  double h = 0.0;
  std::vector<double> nodes;  // nodes[i] = a + (i + 1) * h
};

// Nodal coefficient vector tied to a Grid; values.size() must equal grid.n.
using GridFunction = std::vector<double>;

// Builds the grid; rejects b <= a, non-finite endpoints and n < 1.
// A single-node grid (n = 1) is allowed: it carries one cell centered at the
// interval midpoint and is useful for boundary-weight checks.
Grid build_grid(double a, double b, int n);

// Discrete L^p norm (h * sum_i |u_i|^p)^(1/p); requires p > 1.
double lp_norm(const Grid& grid, const GridFunction& u, double p);

// Refined grid with the same endpoints and n -> 2n + 1 (halves h).
Grid refine_grid(const Grid& grid);

}  // namespace loglap
