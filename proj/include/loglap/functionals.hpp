#pragma once

#include <map>
#include <optional>
#include <string>

#include "loglap/assembly.hpp"
#include "loglap/nonlinearity.hpp"

namespace loglap {

// psi_p(t) = |t|^(p-2) t, the odd p-power; p > 1.
double psi_p(double t, double p);

struct FunctionalValue {
  double value = 0.0;
  std::optional<GridFunction> gradient;
  std::map<std::string, double> diagnostics;
};

// I_p(u) = (1/p) E_{L,p}(u, u); p-homogeneous.
double I_p(const AssembledForm& form, const GridFunction& u);

// J_p(u) = (1/p) ||u||_p^p; J_p(u) = 1 iff ||u||_p^p = p (the manifold M_p).
double J_p(const Grid& grid, const GridFunction& u, double p);

// Rayleigh quotient I_p(u)/J_p(u); scale-invariant; rejects u == 0.
double rayleigh(const AssembledForm& form, const GridFunction& u);

// Phi_lambda(u) = I_p(u) - lambda J_p(u); gradient apply_Ap(u) - lambda h psi_p(u_i).
FunctionalValue phi_lambda(const AssembledForm& form, const GridFunction& u, double lambda);

// Phi(u) = I_p(u) - h sum_i G(u_i); gradient apply_Ap(u) - h g(u_i) nodewise.
// A critical point satisfies the discrete weak-solution identity
// energy(u, e_i) = h g(u_i) for every basis test vector e_i.
FunctionalValue phi(const AssembledForm& form, const GridFunction& u, const NonlinearitySpec& g);

}  // namespace loglap
