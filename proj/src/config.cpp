#include "loglap/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace loglap {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config error at " + path + ": " + what);
}

void check_keys(const ordered_json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) known = true;
    if (!known) fail(path + "." + item.key(), "unknown field");
  }
}

template <typename T>
void read_field(const ordered_json& obj, const std::string& path, const char* key, T& target) {
  if (!obj.contains(key)) return;
  try {
    obj.at(key).get_to(target);
  } catch (const nlohmann::json::exception& e) {
    fail(path + "." + key, e.what());
  }
}

}  // namespace

Config parse_config_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i < upto; ++i)
      if (text[i] == '\n') ++line;
    throw ConfigError("config parse error at line " + std::to_string(line) + ": " + e.what());
  }

  Config cfg;
  check_keys(j, "config", {"domain", "constants", "nonlinearity", "solver", "verify"});
  if (j.contains("domain")) {
    const auto& d = j.at("domain");
    check_keys(d, "domain", {"a", "b", "n"});
    read_field(d, "domain", "a", cfg.domain.a);
    read_field(d, "domain", "b", cfg.domain.b);
    read_field(d, "domain", "n", cfg.domain.n);
  }
  if (j.contains("constants")) {
    const auto& c = j.at("constants");
    check_keys(c, "constants", {"C", "rho", "p"});
    read_field(c, "constants", "C", cfg.constants.C);
    read_field(c, "constants", "rho", cfg.constants.rho);
    read_field(c, "constants", "p", cfg.constants.p);
  }
  if (j.contains("nonlinearity")) {
    const auto& g = j.at("nonlinearity");
    check_keys(g, "nonlinearity", {"kind", "lambda", "theta", "t0", "t1", "custom_table_path"});
    read_field(g, "nonlinearity", "kind", cfg.nonlinearity.kind);
    read_field(g, "nonlinearity", "lambda", cfg.nonlinearity.lambda);
    read_field(g, "nonlinearity", "theta", cfg.nonlinearity.theta);
    read_field(g, "nonlinearity", "t0", cfg.nonlinearity.t0);
    read_field(g, "nonlinearity", "t1", cfg.nonlinearity.t1);
    read_field(g, "nonlinearity", "custom_table_path", cfg.nonlinearity.custom_table_path);
  }
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    check_keys(s, "solver", {"tol", "max_iter", "restarts", "seed", "m_knots"});
    read_field(s, "solver", "tol", cfg.solver.tol);
    read_field(s, "solver", "max_iter", cfg.solver.max_iter);
    read_field(s, "solver", "restarts", cfg.solver.restarts);
    read_field(s, "solver", "seed", cfg.solver.seed);
    read_field(s, "solver", "m_knots", cfg.solver.m_knots);
  }
  if (j.contains("verify")) {
    const auto& v = j.at("verify");
    check_keys(v, "verify", {"samples", "recipe", "delta", "gamma", "rho_list"});
    read_field(v, "verify", "samples", cfg.verify.samples);
    read_field(v, "verify", "recipe", cfg.verify.recipe);
    read_field(v, "verify", "delta", cfg.verify.delta);
    read_field(v, "verify", "gamma", cfg.verify.gamma);
    read_field(v, "verify", "rho_list", cfg.verify.rho_list);
  }
  validate_config(cfg);
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config error: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize_config(const Config& c) {
  ordered_json j;
  j["domain"] = {{"a", c.domain.a}, {"b", c.domain.b}, {"n", c.domain.n}};
  j["constants"] = {{"C", c.constants.C}, {"rho", c.constants.rho}, {"p", c.constants.p}};
  j["nonlinearity"] = {{"kind", c.nonlinearity.kind},
                       {"lambda", c.nonlinearity.lambda},
                       {"theta", c.nonlinearity.theta},
                       {"t0", c.nonlinearity.t0},
                       {"t1", c.nonlinearity.t1},
                       {"custom_table_path", c.nonlinearity.custom_table_path}};
  j["solver"] = {{"tol", c.solver.tol},
                 {"max_iter", c.solver.max_iter},
                 {"restarts", c.solver.restarts},
                 {"seed", c.solver.seed},
                 {"m_knots", c.solver.m_knots}};
  j["verify"] = {{"samples", c.verify.samples},
                 {"recipe", c.verify.recipe},
                 {"delta", c.verify.delta},
                 {"gamma", c.verify.gamma},
                 {"rho_list", c.verify.rho_list}};
  return j.dump(2) + "\n";
}

void validate_config(const Config& c) {
  if (!std::isfinite(c.domain.a) || !std::isfinite(c.domain.b)) fail("domain", "endpoints must be finite");
  if (!(c.domain.b > c.domain.a)) fail("domain.b", "must exceed domain.a");
  if (c.domain.n < 1) fail("domain.n", "must be >= 1");
  if (!std::isfinite(c.constants.C)) fail("constants.C", "must be finite");
  if (!std::isfinite(c.constants.rho)) fail("constants.rho", "must be finite");
  if (!(c.constants.p > 1.0) || !std::isfinite(c.constants.p)) fail("constants.p", "must be finite and > 1");

  const std::string& kind = c.nonlinearity.kind;
  if (kind != "h1" && kind != "h2" && kind != "h3" && kind != "custom")
    fail("nonlinearity.kind", "must be one of h1, h2, h3, custom");
  if (kind == "custom") {
    if (c.nonlinearity.custom_table_path.empty())
      fail("nonlinearity.custom_table_path", "required for kind = custom");
  } else {
    if (!std::isfinite(c.nonlinearity.lambda)) fail("nonlinearity.lambda", "must be finite");
    if (!(c.nonlinearity.theta > 0.0 && c.nonlinearity.theta <= 1.0))
      fail("nonlinearity.theta", "must lie in (0, 1]");
    if (kind == "h3") {
      if (!(c.nonlinearity.t0 > 1.0)) fail("nonlinearity.t0", "must be > 1");
      if (!(c.nonlinearity.t1 > 0.0 && c.nonlinearity.t1 < c.nonlinearity.t0))
        fail("nonlinearity.t1", "must lie in (0, t0)");
    }
  }

  if (!(c.solver.tol > 0.0)) fail("solver.tol", "must be > 0");
  if (c.solver.max_iter < 1) fail("solver.max_iter", "must be >= 1");
  if (c.solver.restarts < 1) fail("solver.restarts", "must be >= 1");
  if (c.solver.m_knots < 3) fail("solver.m_knots", "must be >= 3");

  if (c.verify.samples < 1) fail("verify.samples", "must be >= 1");
  try {
    recipe_from_string(c.verify.recipe);
  } catch (const std::exception& e) {
    fail("verify.recipe", e.what());
  }
  if (!(c.verify.delta > 0.0)) fail("verify.delta", "must be > 0");
  if (!(c.verify.gamma > 0.0 && c.verify.gamma < 1.0)) fail("verify.gamma", "must lie in (0, 1)");
  if (c.verify.rho_list.size() < 2) fail("verify.rho_list", "needs at least 2 entries");
  for (std::size_t i = 0; i < c.verify.rho_list.size(); ++i) {
    if (!(c.verify.rho_list[i] > 0.0)) fail("verify.rho_list", "entries must be > 0");
    if (i > 0 && !(c.verify.rho_list[i] < c.verify.rho_list[i - 1]))
      fail("verify.rho_list", "entries must be strictly decreasing");
  }
}

NonlinearitySpec make_nonlinearity(const Config& c) {
  const std::string& kind = c.nonlinearity.kind;
  if (kind == "custom") return make_custom_from_csv(c.nonlinearity.custom_table_path, c.constants.p);
  GKind k = GKind::h2;
  if (kind == "h1") k = GKind::h1;
  if (kind == "h3") k = GKind::h3;
  return make_builtin(k, c.nonlinearity.lambda, c.nonlinearity.theta, c.constants.p, c.nonlinearity.t0,
                      c.nonlinearity.t1);
}

}  // namespace loglap
