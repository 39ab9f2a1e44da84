#include "cara/baselines/ddpg.hpp"

#include <string>

#include "cara/marl/agent_io.hpp"
#include "cara/marl/maddpg.hpp"

namespace cara::baselines {

int local_critic_width(int action_length) { return 2 + action_length; }

LocalBatch local_view(const marl::Minibatch& batch, std::size_t agent, int action_length) {
  const auto k = static_cast<Eigen::Index>(agent);
  const Eigen::Index len = action_length;
  return {batch.x.middleRows(2 * k, 2), batch.actions.middleRows(k * len, len),
          batch.rewards.row(k), batch.x_next.middleRows(2 * k, 2)};
}

namespace {

Eigen::MatrixXd stack(const Eigen::MatrixXd& obs, const Eigen::MatrixXd& actions) {
  Eigen::MatrixXd in(obs.rows() + actions.rows(), obs.cols());
  in << obs, actions;
  return in;
}

}  // namespace

Eigen::RowVectorXd local_critic_targets(const marl::AgentPack& agent, const LocalBatch& batch,
                                        double gamma) {
  const Eigen::MatrixXd a_next = agent.target_actor.forward_batch(batch.obs_next);
  const Eigen::MatrixXd q_next = agent.target_critic.forward_batch(stack(batch.obs_next, a_next));
  return batch.rewards + gamma * q_next.row(0);
}

DdpgUpdateResult ddpg_update(marl::AgentPack& agent, const LocalBatch& batch, double gamma,
                             double grad_clip) {
  DdpgUpdateResult r;
  const Eigen::MatrixXd inputs = stack(batch.obs, batch.actions);
  r.critic_loss = marl::critic_regression_step(agent, inputs, local_critic_targets(agent, batch, gamma),
                                               grad_clip);
  r.actor_objective = marl::policy_ascent_step(agent, batch.obs, inputs, 2, grad_clip);
  return r;
}

DdpgLearner::DdpgLearner(std::size_t agents, int action_length, const marl::TrainerConfig& cfg)
    : cfg_(cfg),
      action_length_(action_length),
      buffer_(cfg.buffer_capacity, agents, static_cast<std::size_t>(action_length)),
      sampler_(mix_seed(cfg.seed, 0x5a3e)) {
  cfg_.validate();
  for (std::size_t k = 0; k < agents; ++k) {
    agents_.push_back(marl::make_agent_pack(2, action_length, local_critic_width(action_length),
                                            cfg.hidden, cfg.learning_rate,
                                            marl::agent_seed(cfg.seed, k)));
    exploration_.emplace_back(marl::exploration_seed(cfg.seed, k));
  }
}

env::JointAction DdpgLearner::act(const env::JointObservation& obs, double noise_scale) {
  const std::vector<double> x = obs.flatten();
  env::JointAction actions(agents_.size());
  for (std::size_t k = 0; k < agents_.size(); ++k) {
    const Eigen::VectorXd a = marl::select_action(
        agents_[k].actor, std::span(x).subspan(2 * k, 2), noise_scale, exploration_[k]);
    actions[k].assign(a.data(), a.data() + a.size());
  }
  return actions;
}

void DdpgLearner::observe(const env::JointObservation& obs, const env::JointAction& actions,
                          const env::StepOutcome& outcome) {
  buffer_.push({obs.flatten(), marl::flatten_actions(actions), outcome.rewards,
                outcome.observations.flatten()});
  if (buffer_.size() < static_cast<std::size_t>(cfg_.minibatch)) return;
  const marl::Minibatch batch = buffer_.sample(static_cast<std::size_t>(cfg_.minibatch), sampler_);
  for (std::size_t i = 0; i < agents_.size(); ++i)
    ddpg_update(agents_[i], local_view(batch, i, action_length_), cfg_.gamma, cfg_.grad_clip);
}

void DdpgLearner::end_episode() {
  for (marl::AgentPack& a : agents_) marl::sync_agent_targets(a, cfg_.tau);
}

void DdpgLearner::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  for (std::size_t k = 0; k < agents_.size(); ++k)
    marl::save_agent_pack(marl::agent_dir(dir, k), agents_[k], algorithm());
  std::map<std::string, const Rng*> streams{{"sample", &sampler_}};
  for (std::size_t k = 0; k < exploration_.size(); ++k)
    streams["explore." + std::to_string(k)] = &exploration_[k];
  marl::save_rng_streams(dir / "rng.state", streams);
  marl::save_replay(dir / "replay.bin", buffer_);
}

void DdpgLearner::load(const std::filesystem::path& dir) {
  for (std::size_t k = 0; k < agents_.size(); ++k)
    agents_[k] = marl::load_agent_pack(marl::agent_dir(dir, k), agents_[k]);
  std::map<std::string, Rng*> streams{{"sample", &sampler_}};
  for (std::size_t k = 0; k < exploration_.size(); ++k)
    streams["explore." + std::to_string(k)] = &exploration_[k];
  marl::load_rng_streams(dir / "rng.state", streams);
  marl::load_replay(dir / "replay.bin", buffer_);
}

bool DdpgLearner::finite() const {
  for (const marl::AgentPack& a : agents_)
    if (!a.all_finite()) return false;
  return true;
}

}  // namespace cara::baselines
