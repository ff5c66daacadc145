#include "loglap/eigensolver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "loglap/functionals.hpp"
#include "loglap/rng.hpp"

namespace loglap {

namespace {

constexpr double kPi = 3.14159265358979323846;

double euclid_norm(const GridFunction& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// h^(1/p') scaling of the Euclidean norm, p' = p/(p-1).
double dual_proxy_norm(const Grid& grid, double p, const GridFunction& v) {
  return std::pow(grid.h, (p - 1.0) / p) * euclid_norm(v);
}

// Rescale onto M_p = {||u||_p^p = p}.
void project_Mp(const Grid& grid, double p, GridFunction& u) {
  const double norm = lp_norm(grid, u, p);
  if (norm == 0.0) throw std::runtime_error("eigensolver: cannot project the zero function onto M_p");
  const double factor = std::pow(p, 1.0 / p) / norm;
  for (double& x : u) x *= factor;
}

// Free gradient of the Rayleigh quotient at u in M_p (where J_p(u) = 1 and
// rayleigh = I_p): apply_Ap(u) - mu h psi_p(u).
GridFunction manifold_gradient(const AssembledForm& form, const GridFunction& u, double mu) {
  const double p = form.constants().p;
  const double h = form.grid().h;
  GridFunction grad = apply_Ap(form, u);
  for (int i = 0; i < form.grid().n; ++i) grad[i] -= mu * (h * psi_p(u[i], p));
  return grad;
}

void fix_sign(GridFunction& u) {
  for (double x : u) {
    if (x != 0.0) {
      if (x < 0.0)
        for (double& y : u) y = -y;
      return;
    }
  }
}

struct DescentResult {
  GridFunction u;
  double mu = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Backtracking projected gradient descent of the Rayleigh quotient on M_p
// from the given start. Armijo parameter 1e-4, step halving, step growth on
// acceptance.
DescentResult descend_rayleigh(const AssembledForm& form, GridFunction u, double tol, int max_iter) {
  const double p = form.constants().p;
  const Grid& grid = form.grid();
  project_Mp(grid, p, u);
  double mu = rayleigh(form, u);
  double step = 1.0 / (std::abs(mu) + 1.0);

  DescentResult out;
  for (int iter = 0; iter < max_iter; ++iter) {
    const GridFunction grad = manifold_gradient(form, u, mu);
    const double res = dual_proxy_norm(grid, p, grad);
    if (res <= tol) {
      out.u = std::move(u);
      out.mu = mu;
      out.residual = res;
      out.iterations = iter;
      out.converged = true;
      return out;
    }
    const double g2 = euclid_norm(grad);
    bool accepted = false;
    while (step > 1e-18) {
      GridFunction trial(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] - step * grad[i];
      project_Mp(grid, p, trial);
      const double mu_trial = rayleigh(form, trial);
      if (mu_trial <= mu - 1e-4 * step * g2 * g2) {
        u = std::move(trial);
        mu = mu_trial;
        step = std::min(step * 2.0, 1e6);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // flat to machine precision; report the current iterate
      out.u = std::move(u);
      out.mu = mu;
      out.residual = res;
      out.iterations = iter;
      out.converged = res <= tol;
      return out;
    }
  }
  const GridFunction grad = manifold_gradient(form, u, mu);
  out.residual = dual_proxy_norm(grid, p, grad);
  out.u = std::move(u);
  out.mu = mu;
  out.iterations = max_iter;
  out.converged = out.residual <= tol;
  return out;
}

}  // namespace

EigenResidual eigen_residual(const AssembledForm& form, const GridFunction& u) {
  if (static_cast<int>(u.size()) != form.grid().n)
    throw std::invalid_argument("eigen_residual: function size does not match grid");
  const double norm = lp_norm(form.grid(), u, form.constants().p);
  if (norm == 0.0) throw std::invalid_argument("eigen_residual: undefined at u = 0");
  EigenResidual out;
  out.mu = rayleigh(form, u);
  const GridFunction grad = manifold_gradient(form, u, out.mu);
  out.residual = dual_proxy_norm(form.grid(), form.constants().p, grad);
  return out;
}

EigenPair first_eigenpair(const AssembledForm& form, const EigOptions& opts) {
  if (opts.restarts < 1) throw std::invalid_argument("first_eigenpair: requires restarts >= 1");
  if (opts.max_iter < 1) throw std::invalid_argument("first_eigenpair: requires max_iter >= 1");

  EigenPair best;
  bool have_best = false;
  bool best_converged = false;
  int total_iterations = 0;
  for (int r = 0; r < opts.restarts; ++r) {
    Rng rng(opts.seed + static_cast<std::uint64_t>(r));
    GridFunction start = smoothed_gaussian(form.grid(), rng, 2);
    if (lp_norm(form.grid(), start, form.constants().p) == 0.0) start.assign(form.grid().n, 1.0);
    DescentResult res = descend_rayleigh(form, std::move(start), opts.tol, opts.max_iter);
    total_iterations += res.iterations;
    const bool better = !have_best || (res.converged && !best_converged) ||
                        (res.converged == best_converged && res.mu < best.value);
    if (better) {
      best.value = res.mu;
      best.function = std::move(res.u);
      best.residual = res.residual;
      have_best = true;
      best_converged = res.converged;
    }
  }
  fix_sign(best.function);
  best.iterations = total_iterations;
  best.restarts_used = opts.restarts;
  return best;
}

SpectrumP2 spectrum_p2(const AssembledForm& form) {
  if (form.constants().p != 2.0) throw std::invalid_argument("spectrum_p2: requires p = 2");
  const int n = form.grid().n;
  const double h = form.grid().h;

  // At p = 2, apply_Ap is linear; its columns are the energy matrix entries
  // M_ij = energy(e_i, e_j).
  Eigen::MatrixXd M(n, n);
  GridFunction e(n, 0.0);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    const GridFunction col = apply_Ap(form, e);
    for (int i = 0; i < n; ++i) M(i, j) = col[i];
    e[j] = 0.0;
  }
  const double scale = M.cwiseAbs().maxCoeff();
  const double defect = (M - M.transpose()).cwiseAbs().maxCoeff();
  if (defect > 1e-12 * std::max(1.0, scale)) throw std::runtime_error("spectrum_p2: energy matrix not symmetric");

  Eigen::MatrixXd S = (M + M.transpose()) / (2.0 * h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
  if (solver.info() != Eigen::Success) throw std::runtime_error("spectrum_p2: dense eigensolver failed");

  SpectrumP2 out;
  out.constants = form.constants();
  out.values.resize(n);
  out.functions.resize(n);
  const double c = std::sqrt(2.0 / h);  // J_2 = 1 means h sum u^2 = 2
  for (int k = 0; k < n; ++k) {
    out.values[k] = solver.eigenvalues()(k);
    GridFunction w(n);
    for (int i = 0; i < n; ++i) w[i] = c * solver.eigenvectors()(i, k);
    fix_sign(w);
    out.functions[k] = std::move(w);
  }
  return out;
}

SecondEigenResult second_eigenvalue_heuristic(const AssembledForm& form, const EigenPair& phi1,
                                              const EigOptions& opts) {
  const Grid& grid = form.grid();
  const double p = form.constants().p;
  const double h = grid.h;
  const int n = grid.n;
  if (static_cast<int>(phi1.function.size()) != n)
    throw std::invalid_argument("second_eigenvalue_heuristic: phi1 does not match grid");
  const int m = std::max(9, opts.m_knots);

  // Independent sign-changing direction: one-node sine profile orthogonalized
  // against phi1.
  GridFunction v(n);
  for (int i = 0; i < n; ++i) v[i] = std::sin(2.0 * kPi * (grid.nodes[i] - grid.a) / (grid.b - grid.a));
  double vp = 0.0, pp = 0.0;
  for (int i = 0; i < n; ++i) {
    vp += v[i] * phi1.function[i];
    pp += phi1.function[i] * phi1.function[i];
  }
  for (int i = 0; i < n; ++i) v[i] -= (vp / pp) * phi1.function[i];
  if (lp_norm(grid, v, p) == 0.0) throw std::runtime_error("second_eigenvalue_heuristic: degenerate direction");
  project_Mp(grid, p, v);

  // Path on M_p joining phi1 and -phi1 through v; endpoints stay pinned.
  std::vector<GridFunction> knots(m);
  knots[0] = phi1.function;
  knots[m - 1].resize(n);
  for (int i = 0; i < n; ++i) knots[m - 1][i] = -phi1.function[i];
  for (int k = 1; k + 1 < m; ++k) {
    const double tau = static_cast<double>(k) / (m - 1);
    GridFunction u(n);
    const double ca = std::cos(kPi * tau), sa = std::sin(kPi * tau);
    for (int i = 0; i < n; ++i) u[i] = ca * phi1.function[i] + sa * v[i];
    project_Mp(grid, p, u);
    knots[k] = std::move(u);
  }
  std::vector<double> values(m);
  for (int k = 0; k < m; ++k) values[k] = rayleigh(form, knots[k]);

  auto arg_max = [&]() {
    int kmax = 1;
    for (int k = 2; k + 1 < m; ++k)
      if (values[k] > values[kmax]) kmax = k;
    return kmax;
  };
  auto path_length = [&]() {
    double total = 0.0;
    for (int k = 1; k < m; ++k) {
      double d = 0.0;
      for (int i = 0; i < n; ++i) {
        const double diff = knots[k][i] - knots[k - 1][i];
        d += diff * diff;
      }
      total += std::sqrt(d);
    }
    return total;
  };

  // Arc-length redistribution of the interior knots along the polygonal path,
  // then reprojection onto M_p.
  auto redistribute = [&]() {
    std::vector<double> arc(m, 0.0);
    for (int k = 1; k < m; ++k) {
      double d = 0.0;
      for (int i = 0; i < n; ++i) {
        const double diff = knots[k][i] - knots[k - 1][i];
        d += diff * diff;
      }
      arc[k] = arc[k - 1] + std::sqrt(d);
    }
    if (arc[m - 1] == 0.0) return;
    std::vector<GridFunction> fresh(m);
    fresh[0] = knots[0];
    fresh[m - 1] = knots[m - 1];
    int seg = 1;
    for (int k = 1; k + 1 < m; ++k) {
      const double target = arc[m - 1] * k / (m - 1);
      while (seg < m - 1 && arc[seg] < target) ++seg;
      const double w = (target - arc[seg - 1]) / std::max(arc[seg] - arc[seg - 1], 1e-300);
      GridFunction u(n);
      for (int i = 0; i < n; ++i) u[i] = (1.0 - w) * knots[seg - 1][i] + w * knots[seg][i];
      project_Mp(grid, p, u);
      fresh[k] = std::move(u);
    }
    knots = std::move(fresh);
    for (int k = 1; k + 1 < m; ++k) values[k] = rayleigh(form, knots[k]);
  };

  // String phase: every interior knot takes one displacement-capped Armijo
  // step per sweep (a knot may not move farther than half the knot spacing,
  // so the path cannot tear off the ridge), then the path is re-equidistributed.
  // The max knot settles onto the lowest saddle separating +-phi1.
  SecondEigenResult out;
  out.heuristic = p != 2.0;
  std::vector<double> steps(m, 1.0);
  int iter = 0;
  double prev_max = values[arg_max()];
  int flat = 0;
  const int sweep_budget = std::min(opts.max_iter, 2000);
  for (; iter < sweep_budget; ++iter) {
    const double spacing = path_length() / (m - 1);
    for (int k = 1; k + 1 < m; ++k) {
      const GridFunction grad = manifold_gradient(form, knots[k], values[k]);
      const double g2 = euclid_norm(grad);
      if (g2 == 0.0) continue;
      double s = std::min(steps[k], 0.5 * spacing / g2);
      while (s > 1e-18) {
        GridFunction trial(knots[k].size());
        for (int i = 0; i < n; ++i) trial[i] = knots[k][i] - s * grad[i];
        project_Mp(grid, p, trial);
        const double mu_trial = rayleigh(form, trial);
        if (mu_trial <= values[k] - 1e-4 * s * g2 * g2) {
          knots[k] = std::move(trial);
          values[k] = mu_trial;
          steps[k] = 2.0 * s;
          break;
        }
        s *= 0.5;
      }
    }
    redistribute();
    const double vmax = values[arg_max()];
    flat = std::abs(vmax - prev_max) <= 1e-13 * std::max(1.0, std::abs(vmax)) ? flat + 1 : 0;
    prev_max = vmax;
    if (flat >= 25) break;
  }

  // Refinement phase: descend F(u) = ||A_p u - mu h psi_p(u)||_2^2 on M_p from
  // the argmax knot. Gradient of F uses a finite-difference Hessian-vector
  // product of A_p plus the analytic rank-one and diagonal terms. Zeros of F
  // are exactly the discrete eigenfunctions, so the residual can be driven to
  // tolerance instead of stalling at the path resolution.
  GridFunction u = knots[arg_max()];
  const double mu_string = rayleigh(form, u);
  const double mu_floor = 0.5 * (mu_string + phi1.value);  // reject collapse toward phi1
  auto big_f = [&](const GridFunction& w, double mu_w) {
    const GridFunction r = manifold_gradient(form, w, mu_w);
    double f = 0.0;
    for (double x : r) f += x * x;
    return f;
  };
  double mu = mu_string;
  double fval = big_f(u, mu);
  double fstep = 1.0;
  for (; iter < opts.max_iter; ++iter) {
    const GridFunction r = manifold_gradient(form, u, mu);
    const double rn = euclid_norm(r);
    if (std::pow(h, (p - 1.0) / p) * rn <= opts.tol) break;
    const double eps = 1e-6 * std::max(1.0, std::abs(u[n / 2]));
    GridFunction up(n), um(n);
    for (int i = 0; i < n; ++i) {
      up[i] = u[i] + (eps / rn) * r[i];
      um[i] = u[i] - (eps / rn) * r[i];
    }
    const GridFunction ap = apply_Ap(form, up), am = apply_Ap(form, um);
    double psi_r = 0.0;
    for (int i = 0; i < n; ++i) psi_r += psi_p(u[i], p) * r[i];
    const double jp = J_p(grid, u, p);
    GridFunction grad(n);
    for (int i = 0; i < n; ++i) {
      const double hr = (ap[i] - am[i]) / (2.0 * eps) * rn;
      const double diag = u[i] == 0.0 ? 0.0 : mu * h * (p - 1.0) * std::pow(std::abs(u[i]), p - 2.0) * r[i];
      grad[i] = 2.0 * (hr - (h / jp) * psi_r * r[i] - diag);
    }
    const double g2 = euclid_norm(grad);
    if (g2 == 0.0) break;
    bool moved = false;
    double s = std::min(fstep, 0.1 * euclid_norm(u) / g2);
    while (s > 1e-18) {
      GridFunction trial(n);
      for (int i = 0; i < n; ++i) trial[i] = u[i] - s * grad[i];
      project_Mp(grid, p, trial);
      const double mu_trial = rayleigh(form, trial);
      const double f_trial = big_f(trial, mu_trial);
      if (f_trial <= fval - 1e-4 * s * g2 * g2 && mu_trial >= mu_floor) {
        u = std::move(trial);
        mu = mu_trial;
        fval = f_trial;
        fstep = 2.0 * s;
        moved = true;
        break;
      }
      s *= 0.5;
    }
    if (!moved) break;
  }

  const EigenResidual er = eigen_residual(form, u);
  out.value = er.mu;
  out.function = std::move(u);
  out.residual = er.residual;
  out.converged = er.residual <= opts.tol;
  out.iterations = iter;
  fix_sign(out.function);
  return out;
}

}  // namespace loglap
