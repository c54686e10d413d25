// Command-line front end: each subcommand loads a scenario config, runs the
// matching analysis blocks, and writes CSV/JSON tables under --out.
// Exit codes: 0 ok, 1 invalid input/config, 2 runtime failure, 3 a check ran
// and failed.
#include <cstdio>
#include <exception>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "schrodlab/config.hpp"
#include "schrodlab/runner.hpp"
#include "schrodlab/scenario.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::string out_dir = "out";
  int threads = 1;
  std::uint64_t seed = 0x5eed5eed5eedull;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "scenario config file (.ini)")
      ->required();
  cmd->add_option("--out", args.out_dir, "output directory (default: out)");
  cmd->add_option("--threads", args.threads, "worker threads for sweeps")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", args.seed, "seed for generated test fields");
}

int dispatch(const CommonArgs& args, schrodlab::RunOptions opt) {
  opt.out_dir = args.out_dir;
  opt.threads = args.threads;
  opt.seed = args.seed;
  const schrodlab::ConfigFile cfg = schrodlab::parse_config_file(args.config);
  const schrodlab::Scenario sc = schrodlab::build_scenario(cfg);
  return schrodlab::run_scenario(sc, opt);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"schrodlab: split-step simulations of i u_t + Lap u + V u + F "
               "with observability, weighted-estimate, and mass-balance "
               "diagnostics"};
  app.require_subcommand(1);

  CommonArgs args;
  schrodlab::RunOptions opt;

  CLI::App* simulate = app.add_subcommand(
      "simulate", "solve the scenario and write per-slice summaries");
  add_common(simulate, args);

  CLI::App* observe = app.add_subcommand(
      "observe", "scenario constants, decay fit, certificate checks, probes");
  add_common(observe, args);

  CLI::App* appell = app.add_subcommand(
      "appell-check",
      "dilation scalar bounds and transformed-solution residual");
  add_common(appell, args);

  CLI::App* carleman = app.add_subcommand(
      "carleman-check",
      "weighted lower-bound calibration, checks, and commutator table");
  add_common(carleman, args);

  CLI::App* mass = app.add_subcommand(
      "mass-check", "mass-flux balance residuals at the configured times");
  add_common(mass, args);

  CLI::App* chain = app.add_subcommand(
      "chain-check", "end-to-end inequality accounting at the configured "
                     "dilation ratio");
  add_common(chain, args);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "re-run a scenario over values of one config key");
  add_common(sweep, args);
  std::string axis;
  std::vector<double> values;
  sweep->add_option("--axis", axis, "dotted config key, e.g. "
                    "observe.single_rho")
      ->required();
  sweep->add_option("--values", values, "comma-separated values")
      ->required()
      ->delimiter(',');
  std::string sweep_blocks = "simulate";
  sweep->add_option("--blocks", sweep_blocks,
                    "comma-separated blocks to run per value (simulate, "
                    "observe, appell, carleman, mass, chain)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (simulate->parsed()) {
      opt.run_simulate = true;
      return dispatch(args, opt);
    }
    if (observe->parsed()) {
      opt.run_observe = true;
      return dispatch(args, opt);
    }
    if (appell->parsed()) {
      opt.run_appell = true;
      return dispatch(args, opt);
    }
    if (carleman->parsed()) {
      opt.run_carleman = true;
      return dispatch(args, opt);
    }
    if (mass->parsed()) {
      opt.run_mass = true;
      return dispatch(args, opt);
    }
    if (chain->parsed()) {
      opt.run_chain = true;
      return dispatch(args, opt);
    }
    if (sweep->parsed()) {
      opt.out_dir = args.out_dir;
      opt.threads = args.threads;
      opt.seed = args.seed;
      std::string item;
      std::stringstream ss(sweep_blocks);
      while (std::getline(ss, item, ',')) {
        if (item == "simulate") opt.run_simulate = true;
        else if (item == "observe") opt.run_observe = true;
        else if (item == "appell") opt.run_appell = true;
        else if (item == "carleman") opt.run_carleman = true;
        else if (item == "mass") opt.run_mass = true;
        else if (item == "chain") opt.run_chain = true;
        else throw schrodlab::ValidationError({"unknown sweep block '" +
                                               item + "'"});
      }
      const schrodlab::ConfigFile cfg =
          schrodlab::parse_config_file(args.config);
      return schrodlab::run_sweep(cfg, axis, values, opt);
    }
  } catch (const schrodlab::ValidationError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return 1;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "runtime failure: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
