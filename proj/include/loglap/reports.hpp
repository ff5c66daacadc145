#pragma once

#include <iosfwd>
#include <string>

#include "loglap/config.hpp"
#include "loglap/critical_point.hpp"
#include "loglap/eigensolver.hpp"
#include "loglap/nonlinearity.hpp"
#include "loglap/verify.hpp"

namespace loglap {

inline constexpr const char* kToolkitVersion = "0.1.0";

// All serialization is deterministic: doubles go through the shortest
// round-trip representation, map keys are ordered, and no timestamps or
// wall-clock data ever enter an output file (fixed seed => identical bytes).

std::string to_json(const EigenPair& pair);
std::string to_json(const SpectrumP2& spectrum);
std::string to_json(const SecondEigenResult& second);
std::string to_json(const ConditionReport& report);
std::string to_json(const SuperlinearityReport& report);
std::string to_json(const InequalityReport& report);
std::string to_json(const std::vector<InequalityReport>& reports);
std::string to_json(const SolverReport& report);
std::string manifest_json(const Config& config, const std::string& command, std::uint64_t seed);

// Two-column CSV with header "x,u".
void write_function_csv(std::ostream& os, const Grid& grid, const GridFunction& u);
// CSV "k,lambda" of the ascending spectrum.
void write_spectrum_csv(std::ostream& os, const SpectrumP2& spectrum);
// Per-sample CSV "sample,lhs,rhs,slack".
void write_report_csv(std::ostream& os, const InequalityReport& report);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace loglap
