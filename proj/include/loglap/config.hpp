#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loglap/assembly.hpp"
#include "loglap/grid.hpp"
#include "loglap/nonlinearity.hpp"
#include "loglap/verify.hpp"

namespace loglap {

// JSON run configuration. Every field is optional with the defaults below;
// unknown fields are hard errors so typos cannot silently fall back.
struct Config {
  struct Domain {
    double a = 0.0;
    double b = 1.0;
    int n = 64;
  } domain;

  Constants constants;  // C = 1, rho = 0, p = 2

  struct Nonlinearity {
    std::string kind = "h2";  // h1 | h2 | h3 | custom
    double lambda = 0.0;
    double theta = 0.5;
    double t0 = 2.0;
    double t1 = 0.5;
    std::string custom_table_path;
  } nonlinearity;

  struct Solver {
    double tol = 1e-8;
    int max_iter = 60000;
    int restarts = 8;
    std::uint64_t seed = 12345;
    int m_knots = 33;
  } solver;

  struct Verify {
    int samples = 200;
    std::string recipe = "mixed";
    double delta = 0.5;
    double gamma = 0.75;
    std::vector<double> rho_list = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  } verify;
};

// Thrown for malformed or invalid configuration; message carries the JSON
// path (and the line for parse errors).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Config parse_config_text(const std::string& text);
Config load_config(const std::string& path);
std::string serialize_config(const Config& config);  // round-trips field by field

// Cross-field validation mirroring the module preconditions (p > 1, grid
// bounds, theta range, verify parameters); throws ConfigError naming the field.
void validate_config(const Config& config);

NonlinearitySpec make_nonlinearity(const Config& config);

}  // namespace loglap
