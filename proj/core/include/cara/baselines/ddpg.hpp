#pragma once

#include <Eigen/Dense>

#include <vector>

#include "cara/common/rng.hpp"
#include "cara/marl/learner.hpp"
#include "cara/marl/policy_gradient.hpp"
#include "cara/marl/replay_buffer.hpp"
#include "cara/marl/trainer_config.hpp"

namespace cara::baselines {

// Local critic input width: own observation pair plus own action.
int local_critic_width(int action_length);

/// Agent i's slice of a joint minibatch: (o_i, a_i, r_i, o'_i).
struct LocalBatch {
  Eigen::MatrixXd obs;      // 2 x V
  Eigen::MatrixXd actions;  // L x V
  Eigen::RowVectorXd rewards;
  Eigen::MatrixXd obs_next;  // 2 x V
};

LocalBatch local_view(const marl::Minibatch& batch, std::size_t agent, int action_length);

struct DdpgUpdateResult {
  double critic_loss = 0.0;
  double actor_objective = 0.0;
};

// y = r_i + gamma * Q'_i(o'_i, mu'_i(o'_i)).
Eigen::RowVectorXd local_critic_targets(const marl::AgentPack& agent, const LocalBatch& batch,
                                        double gamma);

/// Critic regression then actor ascent using only the agent's own slice.
DdpgUpdateResult ddpg_update(marl::AgentPack& agent, const LocalBatch& batch, double gamma,
                             double grad_clip);

/// Independent DDPG agents sharing one transition store, each reading only
/// its own columns.
class DdpgLearner : public marl::Learner {
 public:
  DdpgLearner(std::size_t agents, int action_length, const marl::TrainerConfig& cfg);

  std::string_view algorithm() const override { return "ddpg"; }
  env::JointAction act(const env::JointObservation& obs, double noise_scale) override;
  void observe(const env::JointObservation& obs, const env::JointAction& actions,
               const env::StepOutcome& outcome) override;
  void end_episode() override;
  void save(const std::filesystem::path& dir) const override;
  void load(const std::filesystem::path& dir) override;
  bool finite() const override;

  const std::vector<marl::AgentPack>& agents() const { return agents_; }
  std::vector<marl::AgentPack>& agents() { return agents_; }

 private:
  marl::TrainerConfig cfg_;
  int action_length_;
  std::vector<marl::AgentPack> agents_;
  marl::ReplayBuffer buffer_;
  std::vector<Rng> exploration_;
  Rng sampler_;
};

}  // namespace cara::baselines
