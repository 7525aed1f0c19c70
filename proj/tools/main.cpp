#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "lbo/json_io.hpp"
#include "lbo/policy.hpp"
#include "lbo/simulate.hpp"
#include "lbo/solver.hpp"
#include "lbo/sweep.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int workers = 1;
  bool svg = false;
};

void add_common_flags(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--config", opt.config_path, "JSON configuration file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", opt.out_path, "output path (default: stdout / config out)");
  cmd->add_option("--seed", opt.seed, "override the master seed")
      ->each([&](const std::string&) { opt.seed_given = true; });
  cmd->add_option("--workers", opt.workers, "worker threads for sweeps")
      ->check(CLI::PositiveNumber);
}

void write_json(const nlohmann::json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
  out << text;
}

std::string replace_extension(const std::string& path, const std::string& suffix) {
  const std::size_t slash = path.find_last_of('/');
  const std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + suffix;
  return path.substr(0, dot) + suffix;
}

int fail_with_json(const std::exception& e) {
  nlohmann::json err{{"error", {{"type", "runtime"}, {"message", e.what()}}}};
  std::cerr << err.dump() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"backhaul-vs-core packet routing: MDP solver, simulator and sweep harness"};
  app.require_subcommand(1);

  CliOptions opt;
  CLI::App* cmd_solve = app.add_subcommand(
      "solve", "solve the routing MDP and print the result as JSON");
  CLI::App* cmd_simulate = app.add_subcommand(
      "simulate", "simulate the first configured policy and print a report as JSON");
  CLI::App* cmd_threshold = app.add_subcommand(
      "threshold", "print the optimal policy table and its threshold as JSON");
  CLI::App* cmd_sweep = app.add_subcommand(
      "sweep", "run a parameter sweep and write CSV (gain is in units of reward_unit)");
  for (CLI::App* cmd : {cmd_solve, cmd_simulate, cmd_threshold, cmd_sweep})
    add_common_flags(cmd, opt);
  cmd_sweep->add_flag("--svg", opt.svg, "also render reward and threshold SVG charts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    nlohmann::json err{{"error", {{"type", "usage"}, {"message", e.what()}}}};
    std::cerr << err.dump() << "\n";
    return e.get_exit_code();
  }

  try {
    lbo::ExperimentConfig config = lbo::load_config(opt.config_path);
    if (opt.seed_given) config.sim.seed = opt.seed;
    if (opt.svg) config.svg = true;

    if (cmd_solve->parsed() || cmd_threshold->parsed()) {
      config.params.validate();
      config.delay.validate();
      const lbo::SolveResult result = lbo::solve(config.params, config.delay);
      nlohmann::json j = result;
      if (cmd_threshold->parsed()) j.erase("values");
      write_json(j, opt.out_path);
      if (!result.converged) {
        nlohmann::json err{{"error",
                            {{"type", "no_convergence"},
                             {"message", "solver hit the iteration cap; see max_iterations"}}}};
        std::cerr << err.dump() << "\n";
        return 2;
      }
      return 0;
    }

    if (cmd_simulate->parsed()) {
      if (config.policies.empty())
        throw std::runtime_error("config lists no policies");
      const lbo::PolicySpec spec = config.policies.front();
      const lbo::PolicyTable table =
          lbo::bind_policy(spec, config.params, config.delay);
      const lbo::SimulationReport report =
          lbo::simulate(config.params, config.delay, table, config.sim);
      nlohmann::json j{{"policy", lbo::policy_name(spec)}, {"report", report}};
      write_json(j, opt.out_path);
      return 0;
    }

    // sweep
    const std::string csv_path = opt.out_path.empty() ? config.out : opt.out_path;
    const auto rows = lbo::run_sweep(config, opt.workers);
    lbo::emit_csv(rows, csv_path);
    if (config.svg) {
      lbo::emit_plot(rows, replace_extension(csv_path, "_reward.svg"),
                     lbo::PlotKind::Reward);
      lbo::emit_plot(rows, replace_extension(csv_path, "_threshold.svg"),
                     lbo::PlotKind::Threshold);
    }
    return 0;
  } catch (const std::exception& e) {
    return fail_with_json(e);
  }
}
