#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "schrodlab/scenario.hpp"

namespace schrodlab {

// Executes the blocks a subcommand selects and writes the output tables
// under out_dir/<scenario name>/. Returns the worst exit status encountered:
// 0 ok, 3 when a pass/fail check in an analysis block failed. Validation
// problems throw ValidationError (exit 1), runtime failures throw
// std::runtime_error (exit 2).
struct RunOptions {
  std::string out_dir = "out";
  int threads = 1;
  std::uint64_t seed = 0x5eed5eed5eedull;
  bool run_simulate = false;
  bool run_observe = false;
  bool run_appell = false;
  bool run_carleman = false;
  bool run_mass = false;
  bool run_chain = false;
};

int run_scenario(const Scenario& sc, const RunOptions& opt);

// Re-runs the scenario once per value of the dotted key (e.g.
// "observe.single_rho"), collecting each run's summary scalars into one
// table (a row per value, in input order; errors recorded, not fatal).
int run_sweep(const ConfigFile& base_config, const std::string& axis,
              const std::vector<double>& values, const RunOptions& opt);

}  // namespace schrodlab
