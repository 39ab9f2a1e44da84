#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cara/env/topology.hpp"
#include "cara/marl/trainer_config.hpp"

namespace cara::experiment {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, int line, const std::string& message);
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

struct RunConfig {
  std::string algorithm = "maddpg";  // maddpg | ddpg | ac | random
  std::filesystem::path output_dir = "runs";
  int checkpoint_every = 0;  // episodes; 0 = final checkpoint only
  std::vector<std::uint64_t> seeds = {1};
};

struct ExperimentConfig {
  env::TopologyConfig topology;
  marl::TrainerConfig trainer;
  RunConfig run;
  // Unset means 80% of trainer.episodes.
  std::optional<int> noise_decay_episodes;

  // Trainer block with derived fields filled in.
  marl::TrainerConfig resolved_trainer(std::uint64_t seed) const;

  // Throws ConfigError naming the first violated field.
  void validate() const;
};

const std::vector<std::string>& algorithm_tags();

/// `key = value` lines, `#` comments, dotted section keys. Unspecified keys
/// keep their defaults; unknown keys are rejected.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

// Applies one override through the same validation as the parser.
void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value,
                      int line = 0);

bool is_config_key(std::string_view key);
bool is_numeric_config_key(std::string_view key);
std::vector<std::string> config_keys();
std::string get_config_value(const ExperimentConfig& cfg, std::string_view key);

// Every effective value, one `key = value` line each, in key order.
std::string resolved_config_text(const ExperimentConfig& cfg);

// 1 macro, 2 micro, 4 pico, 4 VUEs, S = 6, P = 3, E = 300, T = 50, stations
// and VUEs drawn within 500 m of the macro.
ExperimentConfig desk_preset();

std::string format_real(double v);

}  // namespace cara::experiment
