#include "loglap/reports.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace loglap {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json samples_to_json(const std::vector<ConditionSample>& samples) {
  ordered_json arr = ordered_json::array();
  for (const ConditionSample& s : samples)
    arr.push_back({{"t", s.t},
                   {"g", s.g},
                   {"G", s.G},
                   {"g1_ratio", s.g1_ratio},
                   {"g2_ratio", s.g2_ratio},
                   {"g3_ratio", s.g3_ratio}});
  return arr;
}

ordered_json inequality_to_json(const InequalityReport& rep) {
  ordered_json j;
  j["name"] = rep.name;
  j["passed"] = rep.passed;
  j["empirical_constant"] = rep.empirical_constant;
  j["refinement_drift"] = rep.refinement_drift;
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : rep.parameters) params[k] = v;
  j["parameters"] = params;
  j["samples"] = rep.per_sample.size();
  // the three smallest slacks; the full table goes to CSV
  std::vector<std::size_t> idx(rep.per_sample.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (rep.per_sample[a].slack != rep.per_sample[b].slack)
      return rep.per_sample[a].slack < rep.per_sample[b].slack;
    return a < b;
  });
  ordered_json worst = ordered_json::array();
  for (std::size_t i = 0; i < idx.size() && i < 3; ++i) {
    const PerSample& s = rep.per_sample[idx[i]];
    worst.push_back({{"sample", idx[i]}, {"lhs", s.lhs}, {"rhs", s.rhs}, {"slack", s.slack}});
  }
  j["worst_offenders"] = worst;
  return j;
}

}  // namespace

std::string to_json(const EigenPair& pair) {
  ordered_json j;
  j["lambda"] = pair.value;
  j["residual"] = pair.residual;
  j["iterations"] = pair.iterations;
  j["restarts_used"] = pair.restarts_used;
  j["u"] = pair.function;
  return j.dump(2) + "\n";
}

std::string to_json(const SpectrumP2& spectrum) {
  ordered_json j;
  j["p"] = spectrum.constants.p;
  j["C"] = spectrum.constants.C;
  j["rho"] = spectrum.constants.rho;
  j["count"] = spectrum.values.size();
  j["values"] = spectrum.values;
  return j.dump(2) + "\n";
}

std::string to_json(const SecondEigenResult& second) {
  ordered_json j;
  j["lambda"] = second.value;
  j["residual"] = second.residual;
  j["iterations"] = second.iterations;
  j["heuristic"] = second.heuristic;
  j["converged"] = second.converged;
  j["u"] = second.function;
  return j.dump(2) + "\n";
}

std::string to_json(const ConditionReport& report) {
  ordered_json j;
  j["g1_limit"] = report.g1_limit;
  j["g1_pass"] = report.g1_pass;
  j["g2_limit"] = report.g2_limit;
  j["g2_pass"] = report.g2_pass;
  j["g3_feasible"] = report.g3_feasible;
  j["g3_beta"] = report.g3_beta;
  j["g3_t0"] = report.g3_t0;
  j["all_pass"] = report.all_pass();
  j["samples"] = samples_to_json(report.samples);
  return j.dump(2) + "\n";
}

std::string to_json(const SuperlinearityReport& report) {
  ordered_json j;
  j["passed"] = report.passed;
  j["monotone_from"] = report.monotone_from;
  j["levels"] = report.levels;
  j["crossings"] = report.crossings;
  j["t"] = report.t;
  j["ratio"] = report.ratio;
  return j.dump(2) + "\n";
}

std::string to_json(const InequalityReport& report) { return inequality_to_json(report).dump(2) + "\n"; }

std::string to_json(const std::vector<InequalityReport>& reports) {
  ordered_json arr = ordered_json::array();
  for (const InequalityReport& r : reports) arr.push_back(inequality_to_json(r));
  return arr.dump(2) + "\n";
}

std::string to_json(const SolverReport& report) {
  ordered_json j;
  j["success"] = report.success;
  j["message"] = report.message;
  j["critical_value"] = report.critical_value;
  j["phi_at_solution"] = report.phi_at_solution;
  j["residual"] = report.residual;
  j["rho_used"] = report.rho_used;
  j["R_used"] = report.R_used;
  ordered_json trace = ordered_json::array();
  for (const TraceEntry& t : report.trace)
    trace.push_back({{"iteration", t.iteration},
                     {"argmax_knot", t.argmax_knot},
                     {"max_phi", t.max_phi},
                     {"grad_norm", t.grad_norm}});
  j["trace"] = trace;
  ordered_json cerami = ordered_json::array();
  for (const CeramiEntry& c : report.cerami_monitor)
    cerami.push_back({{"phi", c.phi}, {"weighted_grad", c.weighted_grad}});
  j["cerami_monitor"] = cerami;
  if (report.geometry) {
    const LinkingGeometry& g = *report.geometry;
    j["geometry"] = {{"k", g.k},
                     {"lambda_tilde", g.lambda_tilde},
                     {"lambda_k1", g.lambda_k1},
                     {"R", g.R},
                     {"rho", g.rho},
                     {"A_samples", g.A_samples.size()},
                     {"B_samples", g.B_samples.size()},
                     {"sup_phi_A", g.sup_phi_A},
                     {"inf_phi_B", g.inf_phi_B},
                     {"eq36_ok", g.eq36_ok},
                     {"eq36_violating_sample", g.eq36_violating_sample}};
  }
  j["u"] = report.solution;
  return j.dump(2) + "\n";
}

std::string manifest_json(const Config& config, const std::string& command, std::uint64_t seed) {
  ordered_json j;
  j["tool"] = "loglap";
  j["version"] = kToolkitVersion;
  j["command"] = command;
  j["seed"] = seed;
  j["config"] = ordered_json::parse(serialize_config(config));
  return j.dump(2) + "\n";
}

void write_function_csv(std::ostream& os, const Grid& grid, const GridFunction& u) {
  os << "x,u\n" << std::setprecision(17);
  for (int i = 0; i < grid.n; ++i) os << grid.nodes[i] << ',' << u[i] << '\n';
}

void write_spectrum_csv(std::ostream& os, const SpectrumP2& spectrum) {
  os << "k,lambda\n" << std::setprecision(17);
  for (std::size_t k = 0; k < spectrum.values.size(); ++k) os << k + 1 << ',' << spectrum.values[k] << '\n';
}

void write_report_csv(std::ostream& os, const InequalityReport& report) {
  os << "sample,lhs,rhs,slack\n" << std::setprecision(17);
  for (std::size_t i = 0; i < report.per_sample.size(); ++i) {
    const PerSample& s = report.per_sample[i];
    os << i << ',' << s.lhs << ',' << s.rhs << ',' << s.slack << '\n';
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace loglap
