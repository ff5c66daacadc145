#include "loglap/functionals.hpp"

#include <cmath>
#include <stdexcept>

namespace loglap {

double psi_p(double t, double p) {
  if (t == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(t), p - 1.0), t);
}

double I_p(const AssembledForm& form, const GridFunction& u) { return energy(form, u, u) / form.constants().p; }

double J_p(const Grid& grid, const GridFunction& u, double p) {
  const double norm = lp_norm(grid, u, p);
  return std::pow(norm, p) / p;
}

double rayleigh(const AssembledForm& form, const GridFunction& u) {
  const double jp = J_p(form.grid(), u, form.constants().p);
  if (jp == 0.0) throw std::invalid_argument("rayleigh: undefined at u = 0");
  return I_p(form, u) / jp;
}

FunctionalValue phi_lambda(const AssembledForm& form, const GridFunction& u, double lambda) {
  const double p = form.constants().p;
  const double h = form.grid().h;
  FunctionalValue out;
  const double ip = I_p(form, u);
  const double jp = J_p(form.grid(), u, p);
  out.value = ip - lambda * jp;
  GridFunction grad = apply_Ap(form, u);
  for (int i = 0; i < form.grid().n; ++i) grad[i] -= lambda * (h * psi_p(u[i], p));
  out.gradient = std::move(grad);
  out.diagnostics["I_p"] = ip;
  out.diagnostics["J_p"] = jp;
  return out;
}

FunctionalValue phi(const AssembledForm& form, const GridFunction& u, const NonlinearitySpec& g) {
  const double h = form.grid().h;
  FunctionalValue out;
  const double ip = I_p(form, u);
  double pot = 0.0;
  for (double ui : u) pot += g.G(ui);
  out.value = ip - h * pot;
  GridFunction grad = apply_Ap(form, u);
  for (int i = 0; i < form.grid().n; ++i) grad[i] -= h * g.g(u[i]);
  out.gradient = std::move(grad);
  out.diagnostics["I_p"] = ip;
  out.diagnostics["potential"] = h * pot;
  return out;
}

}  // namespace loglap
