// Flat key-value run configuration with section prefixes. Parsing is
// strict: unknown keys are rejected, and the domain and density sections
// carry no defaults (tolerances do). Grammar is documented in README.md.
#pragma once

#include <filesystem>
#include <string>

#include "cmae/eigen_iteration.hpp"
#include "cmae/geometry.hpp"

namespace cmae {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  DomainSpec domain;
  DensitySpec density;
  SolverConfig solver;
  IterationConfig iteration;
  InitStrategy init = InitStrategy::ScaledRho;

  // oracle command knobs
  int oracle_ode_steps = 0;            // 0: derived from the domain
  std::string oracle_solve_dir;        // optional prior solve output to compare

  std::string output_dir = "out";
};

// Parses `key = value` lines (sections encoded as dotted prefixes, '#'
// comments). Throws ConfigError naming the offending key.
RunConfig parse_run_config(const std::filesystem::path& path);
RunConfig parse_run_config_text(const std::string& text);

}  // namespace cmae
