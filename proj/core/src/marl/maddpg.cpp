#include "cara/marl/maddpg.hpp"

#include <string>

#include "cara/marl/agent_io.hpp"

namespace cara::marl {

int centralized_critic_width(std::size_t agents, int action_length) {
  return static_cast<int>(agents) * (2 + action_length);
}

Eigen::MatrixXd centralized_input(const Eigen::MatrixXd& x, const Eigen::MatrixXd& actions) {
  Eigen::MatrixXd in(x.rows() + actions.rows(), x.cols());
  in << x, actions;
  return in;
}

Eigen::MatrixXd joint_target_actions(const std::vector<AgentPack>& agents,
                                     const Eigen::MatrixXd& x_next) {
  const Eigen::Index len = agents.front().action_length();
  Eigen::MatrixXd a(static_cast<Eigen::Index>(agents.size()) * len, x_next.cols());
  for (std::size_t k = 0; k < agents.size(); ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    a.middleRows(row * len, len) = agents[k].target_actor.forward_batch(x_next.middleRows(2 * row, 2));
  }
  return a;
}

Eigen::RowVectorXd critic_targets(const AgentPack& agent, std::size_t index,
                                  const Minibatch& batch, const Eigen::MatrixXd& target_actions,
                                  double gamma) {
  const Eigen::MatrixXd q_next =
      agent.target_critic.forward_batch(centralized_input(batch.x_next, target_actions));
  return batch.rewards.row(static_cast<Eigen::Index>(index)) + gamma * q_next.row(0);
}

Eigen::RowVectorXd critic_targets(const std::vector<AgentPack>& agents, std::size_t agent,
                                  const Minibatch& batch, double gamma) {
  return critic_targets(agents.at(agent), agent, batch, joint_target_actions(agents, batch.x_next),
                        gamma);
}

double critic_update(AgentPack& agent, const Minibatch& batch, const Eigen::RowVectorXd& targets,
                     double grad_clip) {
  return critic_regression_step(agent, centralized_input(batch.x, batch.actions), targets,
                                grad_clip);
}

double actor_update(std::size_t i, std::vector<AgentPack>& agents, const Minibatch& batch,
                    double grad_clip) {
  AgentPack& agent = agents.at(i);
  const auto row = static_cast<Eigen::Index>(i);
  const Eigen::Index len = agent.action_length();
  const Eigen::Index offset = batch.x.rows() + row * len;
  return policy_ascent_step(agent, batch.x.middleRows(2 * row, 2),
                            centralized_input(batch.x, batch.actions), offset, grad_clip);
}

void sync_targets(std::vector<AgentPack>& agents, double tau) {
  for (AgentPack& a : agents) sync_agent_targets(a, tau);
}

std::vector<double> flatten_actions(const env::JointAction& actions) {
  std::vector<double> flat;
  for (const env::Action& a : actions) flat.insert(flat.end(), a.begin(), a.end());
  return flat;
}

MaddpgLearner::MaddpgLearner(std::size_t agents, int action_length, const TrainerConfig& cfg)
    : cfg_(cfg),
      action_length_(action_length),
      buffer_(cfg.buffer_capacity, agents, static_cast<std::size_t>(action_length)),
      sampler_(mix_seed(cfg.seed, 0x5a3e)) {
  cfg_.validate();
  const int critic_width = centralized_critic_width(agents, action_length);
  for (std::size_t k = 0; k < agents; ++k) {
    agents_.push_back(make_agent_pack(2, action_length, critic_width, cfg.hidden,
                                      cfg.learning_rate, agent_seed(cfg.seed, k)));
    exploration_.emplace_back(exploration_seed(cfg.seed, k));
  }
}

env::JointAction MaddpgLearner::act(const env::JointObservation& obs, double noise_scale) {
  const std::vector<double> x = obs.flatten();
  env::JointAction actions(agents_.size());
  for (std::size_t k = 0; k < agents_.size(); ++k) {
    const Eigen::VectorXd a = select_action(agents_[k].actor, std::span(x).subspan(2 * k, 2),
                                            noise_scale, exploration_[k]);
    actions[k].assign(a.data(), a.data() + a.size());
  }
  return actions;
}

void MaddpgLearner::observe(const env::JointObservation& obs, const env::JointAction& actions,
                            const env::StepOutcome& outcome) {
  buffer_.push({obs.flatten(), flatten_actions(actions), outcome.rewards,
                outcome.observations.flatten()});
  if (buffer_.size() < static_cast<std::size_t>(cfg_.minibatch)) return;

  // One minibatch per environment step, shared by all agents' updates.
  const Minibatch batch = buffer_.sample(static_cast<std::size_t>(cfg_.minibatch), sampler_);
  const Eigen::MatrixXd target_actions = joint_target_actions(agents_, batch.x_next);
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const Eigen::RowVectorXd y = critic_targets(agents_[i], i, batch, target_actions, cfg_.gamma);
    critic_update(agents_[i], batch, y, cfg_.grad_clip);
    actor_update(i, agents_, batch, cfg_.grad_clip);
  }
  ++updates_;
}

void MaddpgLearner::end_episode() { sync_targets(agents_, cfg_.tau); }

void MaddpgLearner::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  for (std::size_t k = 0; k < agents_.size(); ++k)
    save_agent_pack(agent_dir(dir, k), agents_[k], algorithm());
  std::map<std::string, const Rng*> streams{{"sample", &sampler_}};
  for (std::size_t k = 0; k < exploration_.size(); ++k)
    streams["explore." + std::to_string(k)] = &exploration_[k];
  save_rng_streams(dir / "rng.state", streams);
  save_replay(dir / "replay.bin", buffer_);
}

void MaddpgLearner::load(const std::filesystem::path& dir) {
  for (std::size_t k = 0; k < agents_.size(); ++k)
    agents_[k] = load_agent_pack(agent_dir(dir, k), agents_[k]);
  std::map<std::string, Rng*> streams{{"sample", &sampler_}};
  for (std::size_t k = 0; k < exploration_.size(); ++k)
    streams["explore." + std::to_string(k)] = &exploration_[k];
  load_rng_streams(dir / "rng.state", streams);
  load_replay(dir / "replay.bin", buffer_);
}

bool MaddpgLearner::finite() const {
  for (const AgentPack& a : agents_)
    if (!a.all_finite()) return false;
  return true;
}

}  // namespace cara::marl
