#include "cara/marl/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "cara/common/rng.hpp"

namespace cara::marl {

void TrainerConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (episodes < 1) fail("trainer.episodes must be positive");
  if (steps_per_episode < 1) fail("trainer.steps must be positive");
  if (minibatch < 1) fail("trainer.minibatch must be positive");
  if (!(gamma >= 0.0 && gamma < 1.0)) fail("trainer.gamma must lie in [0, 1)");
  if (!(tau >= 0.0 && tau <= 1.0)) fail("trainer.tau must lie in [0, 1]");
  if (!(noise_initial >= 0.0) || !(noise_final >= 0.0)) fail("trainer noise scales must be >= 0");
  if (noise_decay_episodes < 1) fail("trainer.noise_decay_episodes must be positive");
  if (!(learning_rate > 0.0)) fail("trainer.learning_rate must be positive");
  if (buffer_capacity < 1) fail("trainer.buffer_capacity must be positive");
  if (static_cast<std::size_t>(minibatch) > buffer_capacity)
    fail("trainer.minibatch must not exceed trainer.buffer_capacity");
  if (hidden.empty()) fail("trainer.hidden must list at least one layer");
  for (int h : hidden)
    if (h < 1) fail("trainer.hidden sizes must be positive");
  if (!(grad_clip >= 0.0)) fail("trainer.grad_clip must be >= 0");
}

double TrainerConfig::noise_scale(int episode) const {
  if (episode >= noise_decay_episodes) return noise_final;
  const double frac =
      std::clamp(static_cast<double>(episode) / static_cast<double>(noise_decay_episodes), 0.0, 1.0);
  return noise_initial + (noise_final - noise_initial) * frac;
}

TrainingAborted::TrainingAborted(int episode, int step, const std::string& what)
    : std::runtime_error("training aborted at episode " + std::to_string(episode) + ", step " +
                         std::to_string(step) + ": " + what),
      episode_(episode),
      step_(step) {}

std::uint64_t episode_seed(std::uint64_t run_seed, int episode) {
  return mix_seed(run_seed, 0xe915, static_cast<std::uint64_t>(episode));
}

std::vector<EpisodeMetrics> run_training(env::HetVNetEnv& env, Learner& learner,
                                         const TrainerConfig& cfg, const TrainingHooks& hooks) {
  cfg.validate();
  std::vector<EpisodeMetrics> series;
  const auto n = static_cast<double>(env.agent_count());

  for (int e = hooks.first_episode; e < cfg.episodes; ++e) {
    const auto started = std::chrono::steady_clock::now();
    EpisodeMetrics m;
    m.episode = e;
    const double noise = cfg.noise_scale(e);
    env::JointObservation obs = env.reset(episode_seed(cfg.seed, e));
    double throughput_sum = 0.0;

    for (int t = 0; t < cfg.steps_per_episode; ++t) {
      try {
        const env::JointAction actions = learner.act(obs, noise);
        env::StepOutcome out = env.step(actions);
        learner.observe(obs, actions, out);
        for (std::size_t i = 0; i < out.rewards.size(); ++i) {
          m.total_reward += out.rewards[i];
          throughput_sum += out.throughputs_mbps[i];
          m.association_failures += out.grants.rows[i].association_failed ? 1 : 0;
        }
        m.collisions += out.grants.collisions;
        obs = std::move(out.observations);
      } catch (const std::exception& ex) {
        throw TrainingAborted(e, t, ex.what());
      }
      if (!learner.finite()) throw TrainingAborted(e, t, "non-finite network parameters");
    }
    learner.end_episode();

    m.mean_throughput_mbps = throughput_sum / (n * cfg.steps_per_episode);
    m.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    series.push_back(m);
    if (hooks.on_episode) hooks.on_episode(m);
  }
  return series;
}

}  // namespace cara::marl
