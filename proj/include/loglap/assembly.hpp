#pragma once

#include <iosfwd>
#include <vector>

#include "loglap/grid.hpp"

namespace loglap {

// Operator constants. C multiplies the kernel part (near-field, far-field and
// boundary weights); rho is the coefficient of the zero-order term. The exact
// normalizing values C_{N,p}, rho_N depend on conventions that vary across
// the literature, so both are plain configuration with defaults C = 1,
// rho = 0. N is fixed to 1 in this toolkit.
struct Constants {
  double C = 1.0;
  double rho = 0.0;
  double p = 2.0;
  int N = 1;
};

// Exact double integral of 1/|x - y| over two cells of width h whose centers
// are k*h apart, i.e. over [0,h] x [kh,(k+1)h]. Closed form from the
// antiderivative t -> t*ln t; k = 0 is rejected (the same-cell contribution
// vanishes identically for piecewise-constant functions).
double cell_pair_integral(double h, int k);

// Boundary weight kappa(x_i) = C * integral over B_1(x_i) \ Omega of
// |x_i - y|^(-1) dy
//   = C * [max(0, -ln(min(1, x-a))) + max(0, -ln(min(1, b-x)))].
// This is the near-field interaction of an interior cell with the zero
// exterior extension; it carries no cell measure (energy applies h).
std::vector<double> boundary_weight(const Grid& grid, const Constants& constants);

// Precomputed weight tables for the discrete bilinear form. On a uniform grid
// every pair weight depends only on the index offset k = |i - j|, so the
// tables are stored per offset:
//   near (k*h < 1):  C-free exact cell-pair integrals, offsets 1 .. band-1
//   far  (k*h >= 1): C-free midpoint weights h^2 / (k*h), offsets band .. n-1
// kappa_base holds the C-free boundary weights. The scalar C is applied at
// evaluation time so energies with constants (C, rho) are exactly
// C * (kernel part at C=1) + rho * zero_order_pairing.
class AssembledForm {
 public:
  AssembledForm(Grid grid, Constants constants);

  const Grid& grid() const { return grid_; }
  const Constants& constants() const { return constants_; }

  // Smallest k with k*h >= 1 (band width of the near table), capped at n.
  int band() const { return band_; }
  const std::vector<double>& near_base() const { return near_base_; }
  const std::vector<double>& far_base() const { return far_base_; }
  const std::vector<double>& kappa_base() const { return kappa_base_; }
  // kappa including the C factor, as defined by boundary_weight.
  std::vector<double> kappa() const;

 private:
  Grid grid_;
  Constants constants_;
  int band_ = 0;
  std::vector<double> near_base_;
  std::vector<double> far_base_;
  std::vector<double> kappa_base_;
};

AssembledForm assemble_form(const Grid& grid, const Constants& constants);

// Discrete bilinear form E_{L,p}(u, v): near pairs use exact cell-pair
// integrals of psi_p(u_i - u_j)(v_i - v_j), far pairs the midpoint bracket
// psi_p(u_i - u_j)(v_i - v_j) - psi_p(u_i)v_i - psi_p(u_j)v_j (which vanishes
// identically when one point is outside Omega), plus the kappa boundary term
// and the zero-order term, each carrying the cell measure h.
double energy(const AssembledForm& form, const GridFunction& u, const GridFunction& v);

// Zero-order pairing h * sum_i psi_p(u_i) v_i (no rho); exported so the exact
// affine identity energy_{C,rho} = C * energy_{1,0} + rho * zero_order_pairing
// can be reproduced term by term.
double zero_order_pairing(const AssembledForm& form, const GridFunction& u, const GridFunction& v);

// Dual vector r with r . v = energy(form, u, v) for every v.
GridFunction apply_Ap(const AssembledForm& form, const GridFunction& u);

// Split r = r' + r'' into the near-field part A_p' (singular kernel pairs
// inside Omega plus the kappa boundary term, i.e. the full |x-y| < 1 region)
// and the bounded remainder A_p'' (far-field bracket plus zero-order term).
struct ApSplit {
  GridFunction near;      // A_p' u
  GridFunction far_mass;  // A_p'' u
};
ApSplit apply_Ap_split(const AssembledForm& form, const GridFunction& u);

// Discrete seminorm [u]_p = (2 <A_p' u, u>)^(1/p). Zero iff u == 0; a nonzero
// constant has positive seminorm because the exterior extension is zero.
double seminorm(const AssembledForm& form, const GridFunction& u);

// Debug dump of the weight tables: "row,col,weight" triples for pair weights
// followed by "node,kappa" pairs.
void dump_weights_csv(const AssembledForm& form, std::ostream& os);

}  // namespace loglap
