// Command-line front end: Monte Carlo experiment runner, figure
// reproduction and the acceptance suite.

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include "hdqp/acceptance.hpp"
#include "hdqp/errors.hpp"
#include "hdqp/experiment.hpp"
#include "hdqp/figures.hpp"

int main(int argc, char** argv) {
  CLI::App app{"High-dimensional quadratic programs: risk underestimation "
               "and bias-corrected estimators"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  int threads = 1;
  app.add_option("--seed", seed, "Override the base seed (0 keeps defaults)");
  app.add_option("--threads", threads, "Worker threads for replicates")
      ->check(CLI::PositiveNumber);

  // run --config <file>
  auto* run_cmd = app.add_subcommand("run", "Run one experiment from a config file");
  std::string config_path;
  std::string run_out;
  run_cmd->add_option("--config", config_path, "Config file (key = value)")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--out", run_out, "Override output directory");

  // figure <id> --out <dir>
  auto* fig_cmd = app.add_subcommand("figure", "Reproduce a figure preset");
  std::string fig_id;
  std::string fig_out = "figures";
  int fig_replicates = 0;
  fig_cmd->add_option("id", fig_id, "returns_small | returns_large | frontiers")
      ->required();
  fig_cmd->add_option("--out", fig_out, "Output directory");
  fig_cmd->add_option("--replicates", fig_replicates,
                      "Override replicate count (smoke runs)");

  // accept --tier <fast|full>
  auto* accept_cmd = app.add_subcommand("accept", "Run the acceptance suite");
  std::string tier_name = "fast";
  int criterion = 0;
  std::string report_path;
  accept_cmd->add_option("--tier", tier_name, "fast | full")
      ->check(CLI::IsMember({"fast", "full"}));
  accept_cmd->add_option("--criterion", criterion,
                         "Run a single criterion (1..9); 0 runs all")
      ->check(CLI::Range(0, 9));
  accept_cmd->add_option("--report", report_path,
                         "Write the machine-readable report CSV here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      hdqp::experiment::ExperimentConfig config =
          hdqp::experiment::load_config(config_path);
      if (seed != 0) config.base_seed = seed;
      if (threads > 1) config.parallelism = threads;
      if (!run_out.empty()) config.output_dir = run_out;
      const auto result = hdqp::experiment::run_experiment(config);
      std::cout << "wrote " << result.replicates_path << "\n"
                << "wrote " << result.summary_path << "\n";
      return 0;
    }
    if (*fig_cmd) {
      const auto result = hdqp::figures::reproduce_figure(
          fig_id, fig_out, fig_replicates, threads, seed);
      for (const auto& scenario : result.scenarios)
        std::cout << "wrote " << scenario.summary_path << "\n";
      for (const auto& path : result.svg_paths)
        std::cout << "wrote " << path << "\n";
      return 0;
    }
    if (*accept_cmd) {
      const auto tier = hdqp::acceptance::tier_from_string(tier_name);
      const auto report = hdqp::acceptance::run(
          tier, criterion, std::cout, threads,
          seed != 0 ? seed : std::uint64_t{20100801});
      if (!report_path.empty()) {
        hdqp::csv::write_file(hdqp::acceptance::report_table(report),
                              report_path);
        std::cout << "wrote " << report_path << "\n";
      }
      return report.all_passed() ? 0 : 1;
    }
  } catch (const hdqp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
