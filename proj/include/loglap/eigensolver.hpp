#pragma once

#include <cstdint>
#include <vector>

#include "loglap/assembly.hpp"

namespace loglap {

struct EigenPair {
  double value = 0.0;
  GridFunction function;   // normalized so J_p = 1, first nonzero node positive
  double residual = 0.0;   // dual proxy norm h^(1/p') ||apply_Ap(u) - mu h psi_p(u)||_2
  int iterations = 0;
  int restarts_used = 0;
};

struct SpectrumP2 {
  std::vector<double> values;           // ascending
  std::vector<GridFunction> functions;  // J_2-normalized, pairwise h-orthogonal
  Constants constants;
};

struct EigenResidual {
  double mu = 0.0;
  double residual = 0.0;
};

// mu = rayleigh(u); residual of apply_Ap(u) - mu * h * psi_p(u) in the scaled
// Euclidean dual proxy norm h^(1/p') ||.||_2 (a documented proxy for the
// X_0^p(Omega)* norm; the true discrete dual norm would need an auxiliary
// p-problem per evaluation). Zero iff u is a discrete eigenfunction.
EigenResidual eigen_residual(const AssembledForm& form, const GridFunction& u);

struct EigOptions {
  double tol = 1e-9;
  int max_iter = 5000;
  int restarts = 8;
  std::uint64_t seed = 12345;
  int m_knots = 33;  // path knots for the second-eigenvalue heuristic
};

// lambda_1 = inf over M_p = {J_p = 1} of the Rayleigh quotient, by projected
// gradient descent (normalize ||u||_p^p = p after every step) with Armijo
// backtracking, from `restarts` seeded smoothed-gaussian starts. Returns the
// lowest converged value; ties and merges are deterministic by restart index.
// On total non-convergence the best iterate is returned with its residual
// above tol (the explicit failure signal).
EigenPair first_eigenpair(const AssembledForm& form, const EigOptions& opts = {});

// Dense p = 2 spectrum: the full ascending eigenvalues of the generalized
// symmetric problem M w = lambda D w with M_ij = energy(e_i, e_j), D = h I.
// Symmetry of M is asserted before solving. Rejects p != 2.
SpectrumP2 spectrum_p2(const AssembledForm& form);

struct SecondEigenResult {
  double value = 0.0;
  GridFunction function;
  double residual = 0.0;
  int iterations = 0;
  bool heuristic = false;  // true for p != 2: path minimax, not Theorem 1's lambda_2
  bool converged = false;
};

// Path minimax on M_p joining phi1 and -phi1: the max knot of a relaxing
// discrete path descends to a critical point with value >= lambda_1. At p = 2
// this equals lambda_2; for p != 2 the result is labeled HEURISTIC.
SecondEigenResult second_eigenvalue_heuristic(const AssembledForm& form, const EigenPair& phi1,
                                              const EigOptions& opts = {});

}  // namespace loglap
