#pragma once

#include <memory>
#include <string>
#include <vector>

namespace loglap {

enum class GKind { h1, h2, h3, custom };

// A nonlinearity g with primitive G(t) = int_0^t g(s) ds, G(0) = 0.
// Builtins (odd in t, theta in (0,1]):
//   h1(t) = lambda * psi_p(t) * (ln(e + |t|))^theta
//   h2(t) = lambda * psi_p(t) + psi_p(t) * (ln(1 + |t|))^theta
//   h3(t) = lambda * psi_p(t)          for |t| <= t1
//           psi_p(t) * |ln|t||^theta   for |t| >= t0
//           monotone cubic Hermite joining the two pieces on (t1, t0),
//           oddly extended (the bridge is an artifact choice; only the two
//           outer pieces are prescribed).
// G is evaluated from an eagerly built log-spaced cumulative quadrature table
// (read-only afterwards, safe to share across threads).
class NonlinearitySpec {
 public:
  GKind kind = GKind::h2;
  double lambda = 0.0;
  double theta = 0.5;
  double t0 = 2.0;   // h3 only
  double t1 = 0.5;   // h3 only
  double p = 2.0;

  double g(double t) const;
  double G(double t) const;

  // Custom tables only cover a finite range of |t|; builtins are unbounded.
  double table_t_min() const;
  double table_t_max() const;

  struct Impl;
  std::shared_ptr<const Impl> impl;
};

// Constructs a builtin spec and eagerly builds its G table.
// Rejects p <= 1, theta outside (0, 1], t0 <= 1, t1 outside (0, t0).
// theta = 1 sits outside the open interval the theory assumes; it is accepted
// so the (g2) failure mode can be demonstrated end to end.
NonlinearitySpec make_builtin(GKind kind, double lambda, double theta, double p,
                              double t0 = 2.0, double t1 = 0.5);

// Custom nonlinearity from a CSV table with header "t,g": strictly increasing
// t > 0, odd-extended automatically, monotone (Fritsch-Carlson) interpolation
// between knots and g(0) = 0. Evaluation outside [-t_max, t_max] is rejected;
// growth checks clamp their sample grids to the table range.
NonlinearitySpec make_custom_from_csv(const std::string& path, double p);

// G(t) via the memoized table plus a short completion quadrature from the
// nearest table node; even in t by construction.
double eval_G(const NonlinearitySpec& spec, double t);

struct ConditionSample {
  double t = 0.0;
  double g = 0.0;
  double G = 0.0;
  double g1_ratio = 0.0;  // g(t)/psi_p(t)
  double g2_ratio = 0.0;  // g(t)/(psi_p(t) ln|t|)
  double g3_ratio = 0.0;  // (t g(t) - p G(t)) * ln|t| / |t|^p
};

// Growth-condition report for (g1)-(g3):
//   (g1) lim_{t->0} g/psi_p = lambda in R
//   (g2) lim_{|t|->inf} g/(psi_p ln|t|) = 0
//   (g3) 0 < beta |t|^p / ln|t| <= t g(t) - p G(t) for |t| >= t0 > 1, beta in (0,1)
struct ConditionReport {
  double g1_limit = 0.0;
  bool g1_pass = false;
  double g2_limit = 0.0;
  bool g2_pass = false;
  bool g3_feasible = false;
  double g3_beta = 0.0;
  double g3_t0 = 0.0;
  std::vector<ConditionSample> samples;
  bool all_pass() const { return g1_pass && g2_pass && g3_feasible; }
};

struct GrowthGridSpec {
  double t_min = 1e-6;
  double t_max = 1e6;
  int per_decade = 8;
};

// Samples g on a log grid over both signs and estimates the (g1)/(g2) limits
// by Richardson-style extrapolation over the last three sampled decades;
// (g3) feasibility is a search for beta in (0,1) and t0 over the sample grid.
// Reports infeasibility instead of erroring.
ConditionReport check_growth_conditions(const NonlinearitySpec& spec,
                                        const GrowthGridSpec& grid = {});

struct SuperlinearityReport {
  std::vector<double> t;        // sample points > 1
  std::vector<double> ratio;    // G(t)/|t|^p
  double monotone_from = 0.0;   // smallest sample from which ratio is nondecreasing
  // first sample t with G(t)/|t|^p >= a/p for each requested level a
  // (the crossing used by the R selection; 0 when not reached)
  std::vector<double> levels;
  std::vector<double> crossings;
  bool passed = false;
};

// Direct evaluation of G(t)/|t|^p on sampled t in (1, t_max]: eventually
// monotone increasing and unbounded for specs passing (g3).
SuperlinearityReport check_superlinearity(const NonlinearitySpec& spec, double t_max = 1e6,
                                          std::vector<double> levels = {1.0, 2.0, 5.0, 10.0});

}  // namespace loglap
