#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cara::marl {

struct TrainerConfig {
  int episodes = 500;
  int steps_per_episode = 100;
  int minibatch = 64;
  double gamma = 0.95;
  double tau = 0.01;
  double noise_initial = 0.9;
  double noise_final = 0.05;
  int noise_decay_episodes = 400;
  double learning_rate = 0.05;
  std::size_t buffer_capacity = 1000;
  std::vector<int> hidden = {64, 32};
  double grad_clip = 1.0;
  std::uint64_t seed = 1;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;

  // Linear decay from noise_initial to noise_final over the first
  // noise_decay_episodes episodes, flat afterwards.
  double noise_scale(int episode) const;
};

}  // namespace cara::marl
