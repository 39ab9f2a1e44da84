// cara: train and compare channel/association agents on a simulated
// vehicular HetNet.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cara/experiment/config.hpp"
#include "cara/experiment/runner.hpp"

namespace ex = cara::experiment;

int main(int argc, char** argv) {
  CLI::App app{"cara - joint association and channel allocation training"};
  app.require_subcommand(1);

  std::string config_path;
  std::string algo;
  std::optional<std::uint64_t> seed;
  std::string out;

  auto* run = app.add_subcommand("run", "train one algorithm over the configured seeds");
  run->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);
  run->add_option("--algo", algo, "maddpg | ddpg | ac | random")
      ->check(CLI::IsMember(ex::algorithm_tags()));
  run->add_option("--seed", seed, "single seed, replaces run.seeds");
  run->add_option("--out", out, "output directory, replaces run.output_dir");

  std::string param;
  std::vector<std::string> values;
  auto* sw = app.add_subcommand("sweep", "repeat run for each value of one parameter");
  sw->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);
  sw->add_option("--param", param, "config key, or algo")->required();
  sw->add_option("--values", values, "comma separated values")->required()->delimiter(',');
  sw->add_option("--out", out, "output directory, replaces run.output_dir");

  std::string checkpoint;
  auto* rs = app.add_subcommand("resume", "continue a run from a checkpoint directory");
  rs->add_option("--checkpoint", checkpoint, "checkpoint directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  rs->add_option("--out", out, "write metrics and new checkpoints here instead");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*rs) {
      std::optional<std::filesystem::path> override_out;
      if (!out.empty()) override_out = out;
      return ex::resume(checkpoint, &std::cout, override_out);
    }

    ex::ExperimentConfig cfg = ex::parse_config_file(config_path);
    if (!out.empty()) cfg.run.output_dir = out;
    if (*run) {
      if (!algo.empty()) cfg.run.algorithm = algo;
      if (seed) cfg.run.seeds = {*seed};
      return ex::run_experiment(cfg, &std::cout);
    }
    return ex::sweep(cfg, param, values, &std::cout);
  } catch (const ex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
