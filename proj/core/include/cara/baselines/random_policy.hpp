#pragma once

#include <vector>

#include "cara/common/rng.hpp"
#include "cara/marl/learner.hpp"

namespace cara::baselines {

// Uniform actions in [-1, 1]; the yardstick every learned policy must beat.
class RandomLearner : public marl::Learner {
 public:
  RandomLearner(std::size_t agents, int action_length, std::uint64_t seed);

  std::string_view algorithm() const override { return "random"; }
  env::JointAction act(const env::JointObservation& obs, double noise_scale) override;
  void observe(const env::JointObservation&, const env::JointAction&,
               const env::StepOutcome&) override {}
  void end_episode() override {}
  void save(const std::filesystem::path& dir) const override;
  void load(const std::filesystem::path& dir) override;
  bool finite() const override { return true; }

 private:
  std::size_t agents_;
  int action_length_;
  Rng rng_;
};

}  // namespace cara::baselines
