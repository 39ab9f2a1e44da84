#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cara/env/topology.hpp"
#include "cara/experiment/config.hpp"
#include "cara/marl/learner.hpp"
#include "cara/marl/training.hpp"

namespace cara::experiment {

std::unique_ptr<marl::Learner> make_learner(const std::string& algorithm,
                                            const env::Topology& topology,
                                            const marl::TrainerConfig& trainer);

env::Topology run_topology(const ExperimentConfig& cfg, std::uint64_t seed);

struct RunResult {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::filesystem::path csv;  // empty for in-memory runs
  std::vector<marl::EpisodeMetrics> series;
  bool aborted = false;
  std::string error;
};

std::filesystem::path metrics_path(const std::filesystem::path& out, const std::string& algorithm,
                                   std::uint64_t seed);
std::filesystem::path checkpoint_root(const std::filesystem::path& out,
                                      const std::string& algorithm, std::uint64_t seed);
// Checkpoint taken after `episodes` completed episodes.
std::filesystem::path checkpoint_dir(const std::filesystem::path& out, const std::string& algorithm,
                                     std::uint64_t seed, int episodes);

/// One (algorithm, seed) training run. With an output directory the metrics
/// stream to CSV and checkpoints are written at the configured cadence plus
/// once at the end; with an empty path nothing touches the filesystem.
RunResult run_single(const ExperimentConfig& cfg, const std::string& algorithm,
                     std::uint64_t seed, const std::filesystem::path& out,
                     std::ostream* log = nullptr);

// Every seed of cfg.run.seeds with cfg.run.algorithm into cfg.run.output_dir.
// Returns 0 when no run aborted, 1 otherwise.
int run_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);

// Sub-directory per value, named "<param>=<value>". "algo" is accepted as a
// shorthand for run.algo.
int sweep(const ExperimentConfig& cfg, const std::string& param,
          const std::vector<std::string>& values, std::ostream* log = nullptr);

struct CheckpointInfo {
  std::string algorithm;
  std::uint64_t seed = 0;
  int next_episode = 0;  // 0-based index of the first episode still to run
  std::filesystem::path output_dir;
};

CheckpointInfo read_checkpoint_info(const std::filesystem::path& dir);

// Continues a run from a checkpoint directory; rows at or after the resumed
// episode are dropped from the CSV before new ones are appended.
int resume(const std::filesystem::path& checkpoint, std::ostream* log = nullptr,
           const std::optional<std::filesystem::path>& output_override = std::nullopt);

}  // namespace cara::experiment
