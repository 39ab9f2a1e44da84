#pragma once

#include <filesystem>
#include <string_view>

#include "cara/env/hetvnet_env.hpp"

namespace cara::marl {

/// Common surface of every algorithm driven by run_training().
class Learner {
 public:
  virtual ~Learner() = default;

  virtual std::string_view algorithm() const = 0;

  virtual env::JointAction act(const env::JointObservation& obs, double noise_scale) = 0;

  // Called once per environment step with the state the actions were taken
  // in and the resulting outcome; stores experience and runs updates.
  virtual void observe(const env::JointObservation& obs, const env::JointAction& actions,
                       const env::StepOutcome& outcome) = 0;

  virtual void end_episode() = 0;

  // Every network, optimizer accumulator, buffer and RNG stream.
  virtual void save(const std::filesystem::path& dir) const = 0;
  virtual void load(const std::filesystem::path& dir) = 0;

  virtual bool finite() const = 0;
};

}  // namespace cara::marl
