// Command-line driver: solve, simulate, sweep, verify-oracles, compare.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pucci_game/harness.hpp"
#include "pucci_game/oracles.hpp"

namespace fs = std::filesystem;
using namespace pucci_game;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitConfig = 3;

struct CommonArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "experiment config file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out, "output directory (overrides output_dir)");
  cmd->add_option("--seed", args.seed, "Monte Carlo master seed (overrides mc.seed)");
}

ExperimentConfig load(const CommonArgs& args) {
  ExperimentConfig cfg = load_experiment_config(args.config);
  if (!args.out.empty()) cfg.output_dir = args.out;
  if (args.seed) cfg.mc_seed = *args.seed;
  return cfg;
}

void print_rows(const std::vector<ConvergenceRow>& rows) {
  write_summary_csv(std::cout, rows);
}

int finish(const CaseResult& r) {
  print_rows(r.rows);
  if (!r.all_converged()) {
    std::cerr << "at least one eps did not converge\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

std::vector<ConvergenceRow> load_summary(const fs::path& p) {
  const fs::path file = fs::is_directory(p) ? p / "summary.csv" : p;
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open " + file.string());
  return read_summary_csv(in);
}

int verify_oracles() {
  int failures = 0;
  std::cout << std::setprecision(3);
  for (const OracleCheck& c : self_check_oracles()) {
    std::cout << (c.pass() ? "PASS " : "FAIL ") << std::left << std::setw(60) << c.name << " value=" << c.value
              << " limit=" << c.limit << '\n';
    if (!c.pass()) ++failures;
  }
  std::cout << failures << " failing check(s)\n";
  return failures == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid solver and Monte Carlo simulator for the Pucci maximal-operator game"};
  app.require_subcommand(1);

  CommonArgs solve_args, sim_args, sweep_args;
  CLI::App* solve = app.add_subcommand("solve", "solve the DPP for every eps, no Monte Carlo");
  add_common(solve, solve_args);
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo with the configured strategy");
  add_common(simulate, sim_args);
  CLI::App* sweep = app.add_subcommand("sweep", "solve and simulate every eps");
  add_common(sweep, sweep_args);
  CLI::App* verify = app.add_subcommand("verify-oracles", "self-check the closed-form reference solutions");
  std::string run_a, run_b;
  CLI::App* compare = app.add_subcommand("compare", "compare two summary.csv files or run directories");
  compare->add_option("run_a", run_a)->required();
  compare->add_option("run_b", run_b)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*solve) {
      return finish(run_case(load(solve_args), {.solve = true, .monte_carlo = false}));
    }
    if (*simulate) {
      const ExperimentConfig cfg = load(sim_args);
      const bool needs_values = cfg.mc_strategy == McStrategy::Greedy;
      return finish(run_case(cfg, {.solve = needs_values, .monte_carlo = true}));
    }
    if (*sweep) {
      return finish(run_case(load(sweep_args)));
    }
    if (*verify) return verify_oracles();
    if (*compare) {
      const Comparison c = compare_runs(load_summary(run_a), load_summary(run_b));
      std::cout << c.report;
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}
