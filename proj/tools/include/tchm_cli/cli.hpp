// Command-line front end: scenario runs, catalog listing and invariant suites.
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "tchm/scenarios.hpp"

namespace tchm::cli {

enum ExitCode { kOk = 0, kUsage = 1, kInvariant = 2, kIntegration = 3 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// JSON document: {"scenario", "params", "options", "t_max", "dt", "samples", "initial"}.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
// key=value; keys naming an option of the scenario go to options, the rest must be numeric.
void apply_override(ScenarioConfig& cfg, const std::string& assignment);

// Shortest round-trip decimal representation.
std::string format_double(double v);
void write_csv(std::ostream& os, const RunResult& r);
void write_report(std::ostream& os, const RunResult& r, double wall_seconds);
void write_catalog(std::ostream& os);

std::vector<Check> verify_darkstates();
std::vector<Check> verify_dynamics();
// suite: darkstates, dynamics or all. Prints one line per check; returns kOk or kInvariant.
int verify(const std::string& suite, std::ostream& os);

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace tchm::cli
