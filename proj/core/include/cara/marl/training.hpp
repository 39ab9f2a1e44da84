#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cara/env/hetvnet_env.hpp"
#include "cara/marl/learner.hpp"
#include "cara/marl/trainer_config.hpp"

namespace cara::marl {

struct EpisodeMetrics {
  int episode = 0;
  double total_reward = 0.0;          // all agents, all steps
  double mean_throughput_mbps = 0.0;  // per VUE per step
  int association_failures = 0;
  int collisions = 0;
  double wall_seconds = 0.0;
};

class TrainingAborted : public std::runtime_error {
 public:
  TrainingAborted(int episode, int step, const std::string& what);
  int episode() const { return episode_; }
  int step() const { return step_; }

 private:
  int episode_;
  int step_;
};

// Seed for the environment reset of `episode`; shared by all algorithms so
// that comparisons see the same VUE placements.
std::uint64_t episode_seed(std::uint64_t run_seed, int episode);

struct TrainingHooks {
  int first_episode = 0;
  std::function<void(const EpisodeMetrics&)> on_episode;
};

/// Episode/step loop: act, step, observe (store + update), then end_episode
/// (target sync) once per episode. Throws TrainingAborted with the episode
/// and step when the learner fails or any network becomes non-finite.
std::vector<EpisodeMetrics> run_training(env::HetVNetEnv& env, Learner& learner,
                                         const TrainerConfig& cfg, const TrainingHooks& hooks = {});

}  // namespace cara::marl
