// Independent oracles, written and frozen before the library implementation.
// Nothing here shares code with src/: quadrature is tanh-sinh (the library
// uses closed forms and adaptive Simpson), energies are brute-force pair sums,
// gradients come from central differences.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "loglap/grid.hpp"

namespace oracles {

// Tanh-sinh (double exponential) quadrature on (a, b); robust for integrable
// endpoint singularities such as the log blow-ups of the kernel integrals.
inline double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                        int max_level = 12, double tol = 1e-14) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const double pi_half = 1.5707963267948966;
  // summand at abscissa parameter t (both symmetric nodes; t = 0 once)
  auto g = [&](double t) -> double {
    const double s = pi_half * std::sinh(t);
    const double x = std::tanh(s);
    const double ch = std::cosh(s);
    const double w = pi_half * std::cosh(t) / (ch * ch);
    if (t == 0.0) return f(mid) * w;
    const double xp = mid + half * x;
    const double xm = mid - half * x;
    double total = 0.0;
    if (xp > a && xp < b) total += f(xp) * w;
    if (xm > a && xm < b) total += f(xm) * w;
    return total;
  };
  double step = 1.0;
  double sum = g(0.0);
  for (double t = 1.0; t <= 6.5; t += 1.0) sum += g(t);
  double result = half * step * sum;
  double prev = result;
  for (int level = 1; level <= max_level; ++level) {
    step *= 0.5;
    for (double t = step; t <= 6.5; t += 2.0 * step) sum += g(t);
    result = half * step * sum;
    if (level >= 4 && std::abs(result - prev) <= tol * (std::abs(result) + 1e-300)) return result;
    prev = result;
  }
  return result;
}

// Adaptive Simpson, independent of the library's integrator settings.
inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0) return left + right;
  if (std::abs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int depth = 48) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Double integral of 1/|x-y| over [0,h] x [kh,(k+1)h] by nested tanh-sinh:
// inner integral in y (near-endpoint singularity as x -> h for k = 1), outer
// in x (log endpoint singularity).
inline double cell_pair_integral(double h, int k) {
  auto inner = [&](double x) {
    return tanh_sinh([&](double y) { return 1.0 / std::abs(y - x); }, k * h, (k + 1) * h, 12,
                     1e-15);
  };
  return tanh_sinh(inner, 0.0, h, 12, 1e-14);
}

// kappa(x) = integral over B_1(x) \ (a,b) of |x-y|^(-1) dy (without C).
inline double kappa(double x, double a, double b) {
  double total = 0.0;
  if (x - 1.0 < a)
    total += adaptive_simpson([&](double y) { return 1.0 / (x - y); }, x - 1.0, a, 1e-13);
  if (x + 1.0 > b)
    total += adaptive_simpson([&](double y) { return 1.0 / (y - x); }, b, x + 1.0, 1e-13);
  return total;
}

inline double psi(double t, double p) {
  if (t == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(t), p - 1.0), t);
}

// Brute-force discrete form: unordered pair sums with quadrature near weights,
// midpoint far weights, kappa boundary term and zero-order term. Meant for
// small n only (the near weights are integrated per pair).
inline double energy_brute(const loglap::Grid& grid, double C, double rho, double p,
                           const loglap::GridFunction& u, const loglap::GridFunction& v) {
  const int n = grid.n;
  const double h = grid.h;
  double near = 0.0, far = 0.0, boundary = 0.0, mass = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = (j - i) * h;
      if (d < 1.0) {
        near += cell_pair_integral(h, j - i) * psi(u[i] - u[j], p) * (v[i] - v[j]);
      } else {
        far += h * h / d *
               (psi(u[i] - u[j], p) * (v[i] - v[j]) - psi(u[i], p) * v[i] - psi(u[j], p) * v[j]);
      }
    }
    boundary += kappa(grid.nodes[i], grid.a, grid.b) * psi(u[i], p) * v[i] * h;
    mass += psi(u[i], p) * v[i] * h;
  }
  return C * (near + far + boundary) + rho * mass;
}

// <A_p' u, u> by brute force (near pairs + kappa; the |x-y| < 1 region).
inline double near_pairing_brute(const loglap::Grid& grid, double C, double p,
                                 const loglap::GridFunction& u) {
  const int n = grid.n;
  const double h = grid.h;
  double near = 0.0, boundary = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = (j - i) * h;
      if (d < 1.0) near += cell_pair_integral(h, j - i) * std::pow(std::abs(u[i] - u[j]), p);
    }
    boundary += kappa(grid.nodes[i], grid.a, grid.b) * std::pow(std::abs(u[i]), p) * h;
  }
  return C * (near + boundary);
}

// Far-field pairing summed over an extended grid that carries explicit
// exterior cells (value 0) out to distance `reach`; used once to confirm the
// bracket vanishes off Omega x Omega.
inline double far_pairing_with_exterior(const loglap::Grid& grid, double C, double p,
                                        const loglap::GridFunction& u,
                                        const loglap::GridFunction& v, double reach) {
  const double h = grid.h;
  const int n = grid.n;
  const int ext = static_cast<int>(std::ceil(reach / h));
  auto val = [&](int i, const loglap::GridFunction& w) {
    return (i >= 0 && i < n) ? w[i] : 0.0;
  };
  double far = 0.0;
  for (int i = -ext; i < n + ext; ++i) {
    for (int j = i + 1; j < n + ext; ++j) {
      const double d = (j - i) * h;
      if (d < 1.0) continue;
      const double ui = val(i, u), uj = val(j, u), vi = val(i, v), vj = val(j, v);
      far += h * h / d * (psi(ui - uj, p) * (vi - vj) - psi(ui, p) * vi - psi(uj, p) * vj);
    }
  }
  return C * far;
}

// Central-difference gradient of a functional.
inline loglap::GridFunction fd_gradient(const std::function<double(const loglap::GridFunction&)>& F,
                                        const loglap::GridFunction& u, double delta = 1e-6) {
  loglap::GridFunction g(u.size(), 0.0);
  loglap::GridFunction w = u;
  for (std::size_t i = 0; i < u.size(); ++i) {
    w[i] = u[i] + delta;
    const double fp = F(w);
    w[i] = u[i] - delta;
    const double fm = F(w);
    w[i] = u[i];
    g[i] = (fp - fm) / (2.0 * delta);
  }
  return g;
}

}  // namespace oracles
