#include "cara/baselines/random_policy.hpp"

#include <filesystem>

#include "cara/marl/agent_io.hpp"

namespace cara::baselines {

RandomLearner::RandomLearner(std::size_t agents, int action_length, std::uint64_t seed)
    : agents_(agents), action_length_(action_length), rng_(mix_seed(seed, 0x4a4d)) {}

env::JointAction RandomLearner::act(const env::JointObservation& /*obs*/, double /*noise_scale*/) {
  env::JointAction actions(agents_, env::Action(static_cast<std::size_t>(action_length_)));
  for (auto& a : actions)
    for (double& v : a) v = rng_.uniform(-1.0, 1.0);
  return actions;
}

void RandomLearner::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  marl::save_rng_streams(dir / "rng.state", {{"uniform", &rng_}});
}

void RandomLearner::load(const std::filesystem::path& dir) {
  marl::load_rng_streams(dir / "rng.state", {{"uniform", &rng_}});
}

}  // namespace cara::baselines
