#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "cara/common/rng.hpp"
#include "cara/marl/learner.hpp"
#include "cara/marl/policy_gradient.hpp"
#include "cara/marl/replay_buffer.hpp"
#include "cara/marl/trainer_config.hpp"

namespace cara::marl {

// Centralized critic input width 2N + N*L.
int centralized_critic_width(std::size_t agents, int action_length);

// [x; a_1; ...; a_N], one sample per column.
Eigen::MatrixXd centralized_input(const Eigen::MatrixXd& x, const Eigen::MatrixXd& actions);

// a'_k = mu'_k(o'_k) for every agent, stacked agent-major (N*L x V).
Eigen::MatrixXd joint_target_actions(const std::vector<AgentPack>& agents,
                                     const Eigen::MatrixXd& x_next);

// y = r_i + gamma * Q'_i(x', a'_1..a'_N). Truncated episodes bootstrap.
Eigen::RowVectorXd critic_targets(const std::vector<AgentPack>& agents, std::size_t agent,
                                  const Minibatch& batch, double gamma);
Eigen::RowVectorXd critic_targets(const AgentPack& agent, std::size_t index,
                                  const Minibatch& batch, const Eigen::MatrixXd& target_actions,
                                  double gamma);

// MSE regression of agent's behavior critic toward `targets`; loss before.
double critic_update(AgentPack& agent, const Minibatch& batch, const Eigen::RowVectorXd& targets,
                     double grad_clip);

// Deterministic policy-gradient ascent for agent i with the other agents'
// sampled actions held fixed; returns mean Q before the step.
double actor_update(std::size_t i, std::vector<AgentPack>& agents, const Minibatch& batch,
                    double grad_clip);

void sync_targets(std::vector<AgentPack>& agents, double tau);

/// Decentralized actors with centralized critics over a shared replay buffer.
class MaddpgLearner : public Learner {
 public:
  MaddpgLearner(std::size_t agents, int action_length, const TrainerConfig& cfg);

  std::string_view algorithm() const override { return "maddpg"; }
  env::JointAction act(const env::JointObservation& obs, double noise_scale) override;
  void observe(const env::JointObservation& obs, const env::JointAction& actions,
               const env::StepOutcome& outcome) override;
  void end_episode() override;
  void save(const std::filesystem::path& dir) const override;
  void load(const std::filesystem::path& dir) override;
  bool finite() const override;

  const std::vector<AgentPack>& agents() const { return agents_; }
  std::vector<AgentPack>& agents() { return agents_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  std::size_t updates() const { return updates_; }

 private:
  TrainerConfig cfg_;
  int action_length_;
  std::vector<AgentPack> agents_;
  ReplayBuffer buffer_;
  std::vector<Rng> exploration_;
  Rng sampler_;
  std::size_t updates_ = 0;
};

// Flattens a joint action into the agent-major layout used by Transition.
std::vector<double> flatten_actions(const env::JointAction& actions);

}  // namespace cara::marl
