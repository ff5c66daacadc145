#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "loglap/assembly.hpp"
#include "loglap/eigensolver.hpp"
#include "loglap/nonlinearity.hpp"

namespace loglap {

// Discretized path gamma: [0,1] -> W with endpoints (0, u1) and m knots.
struct PathEnsemble {
  GridFunction u1;
  std::vector<GridFunction> knots;  // knots.front() = 0, knots.back() = u1
  int m = 33;
};

// Directions feeding the radii selection: sphere_dirs are scanned for the
// Phi >= 0 barrier at seminorm radius rho, ray_dirs (on M_p) must all reach
// Phi(R * d) <= 0 at the chosen R. u0 is the designated endpoint direction.
struct TargetSet {
  std::vector<GridFunction> sphere_dirs;
  GridFunction u0;
  std::vector<GridFunction> ray_dirs;  // defaults to {u0} when empty
};

struct RadiiReport {
  bool ok = false;
  double rho = 0.0;
  double R = 0.0;
  GridFunction u1;  // R * u0
  int rho_steps = 0;
  int R_steps = 0;
  double sphere_min_phi = 0.0;  // min Phi over sphere_dirs at radius rho
  double phi_at_u1 = 0.0;
  std::string message;
};

struct RadiiOptions {
  double rho_start = 1.0;
  double rho_min = 1e-8;
  double R_max = 1e6;
};

// Lemma 10 / Lemma 11 style radii: scan rho in {rho_start * 2^-j} until
// min over sphere directions of Phi(rho * u / ||u||) >= 0, grow R by doubling
// until Phi(R * d) <= 0 for every ray direction. Fails with diagnostics when
// no rho works down to rho_min (signals lambda >= lambda_1 misuse) or no R
// works up to R_max.
RadiiReport choose_radii(const AssembledForm& form, const NonlinearitySpec& g,
                         const TargetSet& target, const RadiiOptions& opts = {});

struct CeramiEntry {
  double phi = 0.0;
  double weighted_grad = 0.0;  // (1 + ||u||) * ||Phi'(u)|| (dual proxy norm)
};

struct TraceEntry {
  int iteration = 0;
  int argmax_knot = 0;
  double max_phi = 0.0;
  double grad_norm = 0.0;
};

// B0 membership and the sampled linking sets of Theorem 3 (p = 2 only).
struct LinkingGeometry {
  int k = 0;                  // spectral index: lambda_k < lambda_tilde <= lambda < lambda_{k+1}
  double lambda_tilde = 0.0;
  double lambda_k1 = 0.0;     // lambda_{k+1}
  double rayleigh_tol = 1e-9; // B0: rayleigh(u) >= lambda_{k+1} - tol
  std::vector<GridFunction> A0;  // symmetric (+/- pairs) J_2-normalized samples of span(phi_1..phi_k)
  GridFunction u0;               // normalized (k+1)-th eigenfunction
  double R = 0.0;
  double rho = 0.0;
  std::vector<GridFunction> A_samples;
  std::vector<GridFunction> B_samples;
  double sup_phi_A = 0.0;
  double inf_phi_B = 0.0;
  bool eq36_ok = false;  // sup Phi(A_samples) <= inf Phi(B_samples)
  int eq36_violating_sample = -1;
};

struct SolverReport {
  bool success = false;
  double critical_value = 0.0;
  GridFunction solution;
  double residual = 0.0;        // dual proxy norm of apply_Ap(u) - h g(u)
  double phi_at_solution = 0.0;
  std::vector<TraceEntry> trace;
  double rho_used = 0.0;
  double R_used = 0.0;
  std::optional<LinkingGeometry> geometry;
  std::vector<CeramiEntry> cerami_monitor;
  std::string message;
};

struct SolverOptions {
  double tol = 1e-8;
  int max_iter = 60000;
  int m_knots = 33;
  int relax_sweeps = 3;       // descent sweeps on the two knots adjacent to the argmax
  std::uint64_t seed = 12345;
  bool negate_initial_path = false;  // flips the seed path; for odd g the
                                     // returned solution is negated bitwise
  double nontrivial_floor = 1e-6;
  double spectral_gap_tol = 1e-6;
  int sphere_samples = 16;    // radii scan directions
  int t_samples = 17;         // t-grid of the linking cone
  RadiiOptions radii;
};

// Mountain-pass solver for lambda (from g1) < lambda_1: discretized-path
// minimax 0 -> u1 with descent on the argmax knot and re-relaxation of its
// neighbors until the argmax knot's gradient norm <= tol. Post-hoc checks:
// weak-equation residual <= tol, Phi(solution) >= -tol, nontriviality.
SolverReport mountain_pass(const AssembledForm& form, const NonlinearitySpec& g,
                           const SolverOptions& opts = {});

// Theorem 3 geometry at p = 2 with lambda_k < lambda_tilde <= lambda < lambda_{k+1}:
// A0 from the first k oracle eigenfunctions, u0 = phi_{k+1}, radii via
// choose_radii, Eq. (36) (sup Phi(A) <= inf Phi(B)) verified on samples.
// Requires g to satisfy (35): G(t) >= (lambda_tilde / p) |t|^p (checked on a
// sample grid). Throws on p != 2 or a spectral gap below spectral_gap_tol.
LinkingGeometry build_linking_geometry_p2(const AssembledForm& form, const NonlinearitySpec& g,
                                          const SpectrumP2& spectrum, int k, double lambda_tilde,
                                          const SolverOptions& opts = {});

// Linking minimax over deformations of the filled cone X = {t u : u in A}:
// knot field over A_samples x t-grid, boundary gamma|_A pinned (bitwise),
// alternating argmax descent as in mountain_pass; success additionally
// requires critical_value >= inf Phi(B_samples) - tol.
SolverReport solve_linking(const AssembledForm& form, const NonlinearitySpec& g,
                           const LinkingGeometry& geometry, const SolverOptions& opts = {});

}  // namespace loglap
