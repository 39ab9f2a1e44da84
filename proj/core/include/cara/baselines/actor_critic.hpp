#pragma once

#include <Eigen/Dense>

#include <vector>

#include "cara/common/rng.hpp"
#include "cara/marl/learner.hpp"
#include "cara/marl/trainer_config.hpp"
#include "cara/nn/adam.hpp"
#include "cara/nn/mlp.hpp"

namespace cara::baselines {

constexpr double kPolicyStd = 0.1;

/// On-policy one-step advantage actor-critic: tanh-mean Gaussian policy and a
/// state-value network. No replay buffer and no target networks.
struct VanillaAcAgent {
  nn::MlpNet actor;
  nn::MlpNet value;
  nn::AdamState actor_opt;
  nn::AdamState value_opt;

  bool all_finite() const { return actor.all_finite() && value.all_finite(); }
};

VanillaAcAgent make_ac_agent(int action_length, const std::vector<int>& hidden,
                             double learning_rate, std::uint64_t seed);

struct AcTransition {
  Eigen::Vector2d obs;
  Eigen::VectorXd action;  // executed (noisy, clamped) action
  double reward = 0.0;
  Eigen::Vector2d obs_next;
};

struct AcUpdateResult {
  double value_loss = 0.0;
  double advantage = 0.0;
};

// Gradient of (r + gamma v(o') - v(o))^2 in v's parameters, target held fixed.
nn::GradPack value_td_gradient(const nn::MlpNet& value, const AcTransition& t, double gamma,
                               double& loss);

// Gradient of -A * log N(a; mu(o), sigma^2) in the actor parameters.
nn::GradPack actor_advantage_gradient(const nn::MlpNet& actor, const AcTransition& t,
                                      double advantage);

AcUpdateResult ac_update(VanillaAcAgent& agent, const AcTransition& t, double gamma,
                         double grad_clip);

class VanillaAcLearner : public marl::Learner {
 public:
  VanillaAcLearner(std::size_t agents, int action_length, const marl::TrainerConfig& cfg);

  std::string_view algorithm() const override { return "ac"; }
  // Ignores noise_scale: exploration is the fixed-std policy itself.
  env::JointAction act(const env::JointObservation& obs, double noise_scale) override;
  void observe(const env::JointObservation& obs, const env::JointAction& actions,
               const env::StepOutcome& outcome) override;
  void end_episode() override {}
  void save(const std::filesystem::path& dir) const override;
  void load(const std::filesystem::path& dir) override;
  bool finite() const override;

  const std::vector<VanillaAcAgent>& agents() const { return agents_; }

 private:
  marl::TrainerConfig cfg_;
  std::vector<VanillaAcAgent> agents_;
  std::vector<Rng> exploration_;
};

}  // namespace cara::baselines
