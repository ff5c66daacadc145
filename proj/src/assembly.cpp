#include "loglap/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "loglap/functionals.hpp"
#include "loglap/kernels.hpp"

namespace loglap {

namespace {

void check_constants(const Constants& c) {
  if (c.N != 1) throw std::invalid_argument("Constants: only N = 1 is supported");
  if (!(c.p > 1.0)) throw std::invalid_argument("Constants: requires p > 1");
  if (!std::isfinite(c.C) || !std::isfinite(c.rho)) throw std::invalid_argument("Constants: C, rho must be finite");
}

void check_size(const AssembledForm& form, const GridFunction& u, const char* who) {
  if (static_cast<int>(u.size()) != form.grid().n)
    throw std::invalid_argument(std::string(who) + ": function size does not match grid");
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double cell_pair_integral(double h, int k) {
  if (!(h > 0.0)) throw std::invalid_argument("cell_pair_integral: requires h > 0");
  if (k < 1) throw std::invalid_argument("cell_pair_integral: requires k >= 1");
  if (k == 1) return 2.0 * h * std::log(2.0);
  // (k+1)ln(k+1) - 2k ln k + (k-1)ln(k-1) rewritten to avoid cancellation:
  // k*ln(1 - 1/k^2) + ln(1 + 2/(k-1)).
  const double kd = static_cast<double>(k);
  return h * (kd * std::log1p(-1.0 / (kd * kd)) + std::log1p(2.0 / (kd - 1.0)));
}

std::vector<double> boundary_weight(const Grid& grid, const Constants& constants) {
  check_constants(constants);
  std::vector<double> kappa(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double dl = grid.nodes[i] - grid.a;
    const double dr = grid.b - grid.nodes[i];
    const double left = dl < 1.0 ? -std::log(dl) : 0.0;
    const double right = dr < 1.0 ? -std::log(dr) : 0.0;
    kappa[i] = constants.C * (left + right);
  }
  return kappa;
}

AssembledForm::AssembledForm(Grid grid, Constants constants) : grid_(std::move(grid)), constants_(constants) {
  check_constants(constants_);
  int band = static_cast<int>(std::ceil(1.0 / grid_.h));
  while (band > 1 && (band - 1) * grid_.h >= 1.0) --band;
  while (band * grid_.h < 1.0) ++band;
  band_ = std::min(band, grid_.n);

  near_base_.resize(band_ - 1);
  for (int k = 1; k < band_; ++k) near_base_[k - 1] = cell_pair_integral(grid_.h, k);
  far_base_.resize(std::max(0, grid_.n - band_));
  for (int k = band_; k < grid_.n; ++k) far_base_[k - band_] = grid_.h / static_cast<double>(k);

  const Constants unit{1.0, 0.0, constants_.p, constants_.N};
  kappa_base_ = boundary_weight(grid_, unit);
}

std::vector<double> AssembledForm::kappa() const {
  std::vector<double> out(kappa_base_);
  for (double& v : out) v *= constants_.C;
  return out;
}

AssembledForm assemble_form(const Grid& grid, const Constants& constants) { return AssembledForm(grid, constants); }

double energy(const AssembledForm& form, const GridFunction& u, const GridFunction& v) {
  check_size(form, u, "energy");
  check_size(form, v, "energy");
  const int n = form.grid().n;
  GridFunction rn(n), rf(n);
  kernels::near_rows(form, u.data(), rn.data());
  kernels::far_rows(form, u.data(), rf.data());
  double base = 0.0;
  for (int i = 0; i < n; ++i) base += (rn[i] + rf[i]) * v[i];
  double result = form.constants().C * base;
  if (form.constants().rho != 0.0) result += form.constants().rho * zero_order_pairing(form, u, v);
  return result;
}

double zero_order_pairing(const AssembledForm& form, const GridFunction& u, const GridFunction& v) {
  check_size(form, u, "zero_order_pairing");
  check_size(form, v, "zero_order_pairing");
  const double p = form.constants().p;
  double s = 0.0;
  for (int i = 0; i < form.grid().n; ++i) s += psi_p(u[i], p) * v[i];
  return form.grid().h * s;
}

ApSplit apply_Ap_split(const AssembledForm& form, const GridFunction& u) {
  check_size(form, u, "apply_Ap_split");
  const int n = form.grid().n;
  const double C = form.constants().C;
  const double rho = form.constants().rho;
  const double p = form.constants().p;
  const double h = form.grid().h;
  ApSplit split;
  split.near.resize(n);
  split.far_mass.resize(n);
  kernels::near_rows(form, u.data(), split.near.data());
  kernels::far_rows(form, u.data(), split.far_mass.data());
  for (int i = 0; i < n; ++i) {
    split.near[i] *= C;
    split.far_mass[i] *= C;
    if (rho != 0.0) split.far_mass[i] += rho * (h * psi_p(u[i], p));
  }
  return split;
}

GridFunction apply_Ap(const AssembledForm& form, const GridFunction& u) {
  ApSplit split = apply_Ap_split(form, u);
  GridFunction r(split.near.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = split.near[i] + split.far_mass[i];
  return r;
}

double seminorm(const AssembledForm& form, const GridFunction& u) {
  check_size(form, u, "seminorm");
  const int n = form.grid().n;
  GridFunction rn(n);
  kernels::near_rows(form, u.data(), rn.data());
  for (int i = 0; i < n; ++i) rn[i] *= form.constants().C;
  const double pairing = std::max(0.0, dot(rn, u));
  return std::pow(2.0 * pairing, 1.0 / form.constants().p);
}

void dump_weights_csv(const AssembledForm& form, std::ostream& os) {
  const int n = form.grid().n;
  const double C = form.constants().C;
  os << "row,col,weight\n";
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int k = j - i;
      const double w = k < form.band() ? C * form.near_base()[k - 1] : C * form.far_base()[k - form.band()];
      os << i << ',' << j << ',' << w << '\n';
    }
  }
  os << "node,kappa\n";
  const std::vector<double> kap = form.kappa();
  for (int i = 0; i < n; ++i) os << i << ',' << kap[i] << '\n';
}

}  // namespace loglap
