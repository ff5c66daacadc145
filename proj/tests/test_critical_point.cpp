#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "loglap/critical_point.hpp"
#include "loglap/eigensolver.hpp"
#include "loglap/functionals.hpp"

using namespace loglap;

namespace {

AssembledForm unit_form(int n, double p = 2.0) {
  Constants c;
  c.p = p;
  return assemble_form(build_grid(0.0, 1.0, n), c);
}

double max_weak_residual(const AssembledForm& form, const NonlinearitySpec& g, const GridFunction& u) {
  const GridFunction au = apply_Ap(form, u);
  double scale = 0.0;
  for (double x : au) scale = std::max(scale, std::abs(x));
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    worst = std::max(worst, std::abs(au[i] - form.grid().h * g.g(u[i])));
  return worst / (1.0 + scale);
}

}  // namespace

TEST_CASE("choose_radii finds a mountain geometry for lambda < lambda_1") {
  AssembledForm form = unit_form(32);
  NonlinearitySpec g = make_builtin(GKind::h2, 0.0, 0.5, 2.0);
  EigenPair e1 = first_eigenpair(form);

  TargetSet target;
  target.u0 = e1.function;
  target.sphere_dirs = {e1.function};
  RadiiOptions opts;
  RadiiReport rep = choose_radii(form, g, target, opts);
  CHECK(rep.ok);
  CHECK(rep.rho > 0.0);
  CHECK(rep.R >= 1.0);
  CHECK(rep.sphere_min_phi >= 0.0);
  CHECK(rep.phi_at_u1 <= 0.0);
  CHECK(rep.u1.size() == 32);
  // rho sits below R * dist(0, M) by construction
  CHECK(rep.rho < rep.R * seminorm(form, e1.function));
}

TEST_CASE("choose_radii reports failure when lambda >= lambda_1 (sphere dips negative)") {
  AssembledForm form = unit_form(32);
  SpectrumP2 spec = spectrum_p2(form);
  NonlinearitySpec g = make_builtin(GKind::h2, spec.values[0] + 0.5, 0.5, 2.0);
  EigenPair e1 = first_eigenpair(form);
  TargetSet target;
  target.u0 = e1.function;
  target.sphere_dirs = {e1.function};
  RadiiReport rep = choose_radii(form, g, target, RadiiOptions{});
  CHECK_FALSE(rep.ok);
  CHECK(rep.message.find("rho") != std::string::npos);
}

TEST_CASE("mountain pass at p = 2, lambda = 0: nontrivial critical point") {
  AssembledForm form = unit_form(32);
  NonlinearitySpec g = make_builtin(GKind::h2, 0.0, 0.5, 2.0);
  SolverOptions opts;
  opts.tol = 1e-6;
  SolverReport rep = mountain_pass(form, g, opts);
  REQUIRE(rep.success);
  CHECK(rep.message == "converged");
  CHECK(rep.residual <= opts.tol);
  CHECK(rep.phi_at_solution >= -opts.tol);
  CHECK(rep.critical_value == rep.phi_at_solution);
  CHECK(lp_norm(form.grid(), rep.solution, 2.0) > 1e-3);
  CHECK(max_weak_residual(form, g, rep.solution) <= opts.tol);
  CHECK(rep.rho_used > 0.0);
  CHECK(rep.R_used >= 1.0);
  CHECK_FALSE(rep.trace.empty());
  CHECK_FALSE(rep.cerami_monitor.empty());
  // the monitor's final weighted gradient reflects convergence
  CHECK(rep.cerami_monitor.back().weighted_grad <= 10.0 * opts.tol);
  // path maxima track the critical value; the discrete knots undersample the
  // ridge slightly, so allow a small relative slack
  for (const TraceEntry& t : rep.trace)
    CHECK(t.max_phi >= rep.critical_value - 0.05 * (1.0 + std::abs(rep.critical_value)));
}

TEST_CASE("mountain pass: negated seed path gives the bitwise-negated solution") {
  AssembledForm form = unit_form(24);
  NonlinearitySpec g = make_builtin(GKind::h2, 0.0, 0.5, 2.0);
  SolverOptions opts;
  opts.tol = 1e-6;
  SolverReport a = mountain_pass(form, g, opts);
  SolverOptions neg = opts;
  neg.negate_initial_path = true;
  SolverReport b = mountain_pass(form, g, neg);
  REQUIRE(a.success);
  REQUIRE(b.success);
  REQUIRE(a.solution.size() == b.solution.size());
  for (std::size_t i = 0; i < a.solution.size(); ++i) CHECK(b.solution[i] == -a.solution[i]);
  CHECK(b.critical_value == a.critical_value);
}

TEST_CASE("mountain pass refuses a g that fails the growth conditions") {
  AssembledForm form = unit_form(16);
  NonlinearitySpec bad = make_builtin(GKind::h2, 0.0, 1.0, 2.0);  // theta = 1: (g2) fails
  SolverReport rep = mountain_pass(form, bad, SolverOptions{});
  CHECK_FALSE(rep.success);
  CHECK(rep.message.find("growth conditions") != std::string::npos);
}

TEST_CASE("mountain pass reports the radii failure for lambda above lambda_1") {
  AssembledForm form = unit_form(24);
  SpectrumP2 spec = spectrum_p2(form);
  NonlinearitySpec g = make_builtin(GKind::h2, spec.values[0] + 0.3, 0.5, 2.0);
  SolverReport rep = mountain_pass(form, g, SolverOptions{});
  CHECK_FALSE(rep.success);
  CHECK(rep.message.find("radii") != std::string::npos);
}

TEST_CASE("linking geometry and solver at p = 2 for lambda in (lambda_1, lambda_2)") {
  AssembledForm form = unit_form(32);
  SpectrumP2 spec = spectrum_p2(form);
  const double lambda = 0.5 * (spec.values[0] + spec.values[1]);
  NonlinearitySpec g = make_builtin(GKind::h2, lambda, 0.5, 2.0);
  SolverOptions opts;
  opts.tol = 1e-6;
  opts.t_samples = 9;

  LinkingGeometry geo = build_linking_geometry_p2(form, g, spec, 1, lambda, opts);
  CHECK(geo.k == 1);
  CHECK(geo.lambda_k1 == doctest::Approx(spec.values[1]));
  CHECK(geo.eq36_ok);
  CHECK(geo.sup_phi_A <= geo.inf_phi_B);
  CHECK(geo.eq36_violating_sample == -1);
  CHECK(geo.rho > 0.0);
  CHECK(geo.R >= 1.0);
  CHECK_FALSE(geo.A_samples.empty());
  CHECK_FALSE(geo.B_samples.empty());
  // A0 is a symmetric set
  REQUIRE(geo.A0.size() == 2);
  for (std::size_t i = 0; i < geo.A0[0].size(); ++i) CHECK(geo.A0[1][i] == -geo.A0[0][i]);

  SolverReport rep = solve_linking(form, g, geo, opts);
  REQUIRE(rep.success);
  CHECK(rep.residual <= opts.tol);
  CHECK(rep.critical_value >= geo.inf_phi_B - opts.tol);
  CHECK(lp_norm(form.grid(), rep.solution, 2.0) > opts.nontrivial_floor);
  CHECK(max_weak_residual(form, g, rep.solution) <= opts.tol);
  REQUIRE(rep.geometry.has_value());
  CHECK(rep.geometry->rho == geo.rho);
}

TEST_CASE("linking geometry input validation") {
  AssembledForm form2 = unit_form(16);
  SpectrumP2 spec = spectrum_p2(form2);
  NonlinearitySpec g2 = make_builtin(GKind::h2, 2.0, 0.5, 2.0);
  SolverOptions opts;
  // p != 2
  AssembledForm form3 = unit_form(16, 3.0);
  NonlinearitySpec g3 = make_builtin(GKind::h2, 2.0, 0.5, 3.0);
  CHECK_THROWS_AS(build_linking_geometry_p2(form3, g3, spec, 1, 2.0, opts), std::invalid_argument);
  // k out of range
  CHECK_THROWS_AS(build_linking_geometry_p2(form2, g2, spec, 0, 2.0, opts), std::invalid_argument);
  CHECK_THROWS_AS(build_linking_geometry_p2(form2, g2, spec, 16, 2.0, opts), std::invalid_argument);
  // lambda_tilde outside the gap
  CHECK_THROWS_AS(build_linking_geometry_p2(form2, g2, spec, 1, spec.values[0] - 0.5, opts),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_linking_geometry_p2(form2, g2, spec, 1, spec.values[1] + 0.5, opts),
                  std::invalid_argument);
  // (35) violated: lambda_tilde above the g1 limit of g leaves G < (lt/p)|t|^p near 0
  const double mid = 0.5 * (spec.values[0] + spec.values[1]);
  NonlinearitySpec weak = make_builtin(GKind::h2, 0.0, 0.5, 2.0);
  CHECK_THROWS_AS(build_linking_geometry_p2(form2, weak, spec, 1, mid, opts), std::invalid_argument);
}

TEST_CASE("solve_linking refuses a geometry whose Eq. (36) flag is down") {
  AssembledForm form = unit_form(16);
  SpectrumP2 spec = spectrum_p2(form);
  const double lambda = 0.5 * (spec.values[0] + spec.values[1]);
  NonlinearitySpec g = make_builtin(GKind::h2, lambda, 0.5, 2.0);
  SolverOptions opts;
  opts.t_samples = 5;
  LinkingGeometry geo = build_linking_geometry_p2(form, g, spec, 1, lambda, opts);
  geo.eq36_ok = false;
  SolverReport rep = solve_linking(form, g, geo, opts);
  CHECK_FALSE(rep.success);
  CHECK(rep.message.find("Eq. (36)") != std::string::npos);
}
