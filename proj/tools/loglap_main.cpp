#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "loglap/config.hpp"
#include "loglap/critical_point.hpp"
#include "loglap/eigensolver.hpp"
#include "loglap/reports.hpp"
#include "loglap/verify.hpp"

namespace {

using namespace loglap;

struct Ctx {
  Config cfg;
  std::string out_dir;
  bool quiet = false;
};

void save(const Ctx& ctx, const std::string& name, const std::string& text) {
  write_text_file((std::filesystem::path(ctx.out_dir) / name).string(), text);
}

void say(const Ctx& ctx, const std::string& line) {
  if (!ctx.quiet) std::cout << line << "\n";
}

AssembledForm make_form(const Config& cfg) {
  const Grid grid = build_grid(cfg.domain.a, cfg.domain.b, cfg.domain.n);
  return AssembledForm(grid, cfg.constants);
}

SolverOptions make_solver_options(const Config& cfg) {
  SolverOptions opts;
  opts.tol = cfg.solver.tol;
  opts.max_iter = cfg.solver.max_iter;
  opts.m_knots = cfg.solver.m_knots;
  opts.seed = cfg.solver.seed;
  return opts;
}

std::string function_csv(const Grid& grid, const GridFunction& u) {
  std::ostringstream ss;
  write_function_csv(ss, grid, u);
  return ss.str();
}

int cmd_eig(const Ctx& ctx, bool second) {
  const AssembledForm form = make_form(ctx.cfg);
  EigOptions opts;
  opts.tol = ctx.cfg.solver.tol;
  opts.max_iter = ctx.cfg.solver.max_iter;
  opts.restarts = ctx.cfg.solver.restarts;
  opts.seed = ctx.cfg.solver.seed;
  const EigenPair pair = first_eigenpair(form, opts);
  save(ctx, "eigenpair.json", to_json(pair));
  save(ctx, "u1.csv", function_csv(form.grid(), pair.function));
  say(ctx, "lambda1 = " + std::to_string(pair.value) + " (residual " + std::to_string(pair.residual) + ")");
  int rc = pair.residual <= opts.tol ? 0 : 2;
  if (second) {
    const SecondEigenResult res = second_eigenvalue_heuristic(form, pair, opts);
    save(ctx, "second.json", to_json(res));
    save(ctx, "u2.csv", function_csv(form.grid(), res.function));
    say(ctx, "lambda2 ~= " + std::to_string(res.value) + (res.converged ? "" : " (not converged)"));
    if (!res.converged) rc = rc == 0 ? 2 : rc;
  }
  return rc;
}

int cmd_spectrum(const Ctx& ctx) {
  if (ctx.cfg.constants.p != 2.0) {
    std::cerr << "spectrum: requires constants.p = 2 (dense spectrum is linear-case only)\n";
    return 1;
  }
  const AssembledForm form = make_form(ctx.cfg);
  const SpectrumP2 spec = spectrum_p2(form);
  save(ctx, "spectrum.json", to_json(spec));
  std::ostringstream ss;
  write_spectrum_csv(ss, spec);
  save(ctx, "spectrum.csv", ss.str());
  say(ctx, "spectrum: " + std::to_string(spec.values.size()) + " eigenvalues, lambda1 = " +
               std::to_string(spec.values.front()));
  return 0;
}

int cmd_solve(const Ctx& ctx, const std::string& mode) {
  NonlinearitySpec g;
  try {
    g = make_nonlinearity(ctx.cfg);
  } catch (const std::exception& e) {
    std::cerr << "nonlinearity: " << e.what() << "\n";
    return 1;
  }
  const ConditionReport cond = check_growth_conditions(g);
  save(ctx, "condition_report.json", to_json(cond));
  if (!cond.all_pass()) {
    std::cerr << "solve: growth conditions (g1)-(g3) not satisfied; see condition_report.json\n";
    return 3;
  }
  const AssembledForm form = make_form(ctx.cfg);
  const SolverOptions opts = make_solver_options(ctx.cfg);
  SolverReport report;
  if (mode == "mountain-pass") {
    report = mountain_pass(form, g, opts);
  } else {
    if (ctx.cfg.constants.p != 2.0) {
      std::cerr << "solve --mode linking: requires p = 2 (the discrete spectrum backing the geometry is "
                   "linear-case only); use --mode mountain-pass\n";
      return 1;
    }
    const SpectrumP2 spec = spectrum_p2(form);
    const double lambda = cond.g1_limit;
    int k = 0;
    while (k < static_cast<int>(spec.values.size()) && spec.values[k] < lambda) ++k;
    if (k == 0) {
      std::cerr << "solve --mode linking: lambda = " << lambda
                << " is below lambda_1; use --mode mountain-pass\n";
      return 1;
    }
    const LinkingGeometry geo = build_linking_geometry_p2(form, g, spec, k, lambda, opts);
    report = solve_linking(form, g, geo, opts);
  }
  save(ctx, "solver_report.json", to_json(report));
  save(ctx, "solution.csv", function_csv(form.grid(), report.solution));
  say(ctx, std::string(mode) + ": " + report.message +
               (report.success ? ", critical value " + std::to_string(report.critical_value) : ""));
  return report.success ? 0 : 2;
}

int cmd_verify(const Ctx& ctx) {
  NonlinearitySpec g;
  try {
    g = make_nonlinearity(ctx.cfg);
  } catch (const std::exception& e) {
    std::cerr << "nonlinearity: " << e.what() << "\n";
    return 1;
  }
  const Grid grid = build_grid(ctx.cfg.domain.a, ctx.cfg.domain.b, ctx.cfg.domain.n);
  VerifyOptions opts;
  opts.samples = ctx.cfg.verify.samples;
  opts.recipe = recipe_from_string(ctx.cfg.verify.recipe);
  opts.delta = ctx.cfg.verify.delta;
  opts.gamma = ctx.cfg.verify.gamma;
  opts.rho_list = ctx.cfg.verify.rho_list;
  opts.seed = ctx.cfg.solver.seed;
  const std::vector<InequalityReport> reports = run_verify_suite(grid, ctx.cfg.constants, g, opts);
  save(ctx, "verify_reports.json", to_json(reports));
  bool all = true;
  for (const InequalityReport& r : reports) {
    std::ostringstream ss;
    write_report_csv(ss, r);
    save(ctx, "report_" + r.name + ".csv", ss.str());
    say(ctx, r.name + ": " + (r.passed ? "pass" : "FAIL") + " (constant " +
                 std::to_string(r.empirical_constant) + ", drift " + std::to_string(r.refinement_drift) + ")");
    all = all && r.passed;
  }
  return all ? 0 : 2;
}

int cmd_check_g(const Ctx& ctx) {
  NonlinearitySpec g;
  try {
    g = make_nonlinearity(ctx.cfg);
  } catch (const std::exception& e) {
    std::cerr << "nonlinearity: " << e.what() << "\n";
    return 1;
  }
  const ConditionReport cond = check_growth_conditions(g);
  save(ctx, "condition_report.json", to_json(cond));
  const SuperlinearityReport sup = check_superlinearity(g);
  save(ctx, "superlinearity.json", to_json(sup));
  say(ctx, std::string("(g1) ") + (cond.g1_pass ? "pass" : "FAIL") + ", (g2) " +
               (cond.g2_pass ? "pass" : "FAIL") + ", (g3) " + (cond.g3_feasible ? "feasible" : "infeasible"));
  return cond.all_pass() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"loglap: numerical toolkit for the logarithmic p-Laplacian Dirichlet problem"};
  app.fallthrough(true);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON configuration file (defaults apply when omitted)");
  app.add_option("--out", out_dir, "output directory (created if missing)");
  CLI::Option* seed_opt = app.add_option("--seed", seed, "seed override");
  app.add_flag("--quiet", quiet, "suppress progress output");

  CLI::App* eig = app.add_subcommand("eig", "first eigenpair via projected gradient descent");
  bool second = false;
  eig->add_flag("--second", second, "also run the second-eigenvalue path heuristic");
  CLI::App* spectrum = app.add_subcommand("spectrum", "dense p=2 spectrum");
  CLI::App* solve = app.add_subcommand("solve", "critical-point solver");
  std::string mode = "mountain-pass";
  solve->add_option("--mode", mode, "mountain-pass | linking")
      ->check(CLI::IsMember({"mountain-pass", "linking"}));
  CLI::App* verify = app.add_subcommand("verify", "inequality property-test suite");
  CLI::App* checkg = app.add_subcommand("check-g", "growth-condition report for the configured g");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  Ctx ctx;
  ctx.quiet = quiet;
  ctx.out_dir = out_dir;
  try {
    if (!config_path.empty()) ctx.cfg = load_config(config_path);
    validate_config(ctx.cfg);
    if (seed_opt->count() > 0) ctx.cfg.solver.seed = seed;
    std::filesystem::create_directories(out_dir);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  std::string command = "eig";
  if (spectrum->parsed()) command = "spectrum";
  if (solve->parsed()) command = mode == "linking" ? "solve-linking" : "solve-mountain-pass";
  if (verify->parsed()) command = "verify";
  if (checkg->parsed()) command = "check-g";

  try {
    save(ctx, "manifest.json", manifest_json(ctx.cfg, command, ctx.cfg.solver.seed));
    if (eig->parsed()) return cmd_eig(ctx, second);
    if (spectrum->parsed()) return cmd_spectrum(ctx);
    if (solve->parsed()) return cmd_solve(ctx, mode);
    if (verify->parsed()) return cmd_verify(ctx);
    if (checkg->parsed()) return cmd_check_g(ctx);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 0;
}
