#include "cara/marl/policy_gradient.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cara::marl {

bool AgentPack::all_finite() const {
  return actor.all_finite() && target_actor.all_finite() && critic.all_finite() &&
         target_critic.all_finite();
}

AgentPack make_agent_pack(int obs_width, int action_length, int critic_width,
                          const std::vector<int>& hidden, double learning_rate,
                          std::uint64_t seed) {
  std::vector<int> actor_dims{obs_width};
  actor_dims.insert(actor_dims.end(), hidden.begin(), hidden.end());
  actor_dims.push_back(action_length);
  std::vector<int> critic_dims{critic_width};
  critic_dims.insert(critic_dims.end(), hidden.begin(), hidden.end());
  critic_dims.push_back(1);

  AgentPack p;
  p.actor = nn::MlpNet::init(actor_dims, nn::OutputActivation::Tanh, mix_seed(seed, 1));
  p.critic = nn::MlpNet::init(critic_dims, nn::OutputActivation::Identity, mix_seed(seed, 2));
  p.target_actor = p.actor;
  p.target_critic = p.critic;
  const nn::AdamConfig opt{learning_rate};
  p.actor_opt = nn::AdamState(p.actor, opt);
  p.critic_opt = nn::AdamState(p.critic, opt);
  return p;
}

std::uint64_t agent_seed(std::uint64_t run_seed, std::size_t index) {
  return mix_seed(run_seed, 0xa9e7, index);
}

std::uint64_t exploration_seed(std::uint64_t run_seed, std::size_t index) {
  return mix_seed(run_seed, 0xe8b1, index);
}

Eigen::VectorXd select_action(const nn::MlpNet& actor, std::span<const double> obs,
                              double noise_scale, Rng& rng) {
  Eigen::VectorXd input = Eigen::Map<const Eigen::VectorXd>(obs.data(),
                                                            static_cast<Eigen::Index>(obs.size()));
  Eigen::VectorXd a = actor.forward(input);
  if (noise_scale > 0.0)
    for (Eigen::Index k = 0; k < a.size(); ++k)
      a[k] = std::clamp(a[k] + noise_scale * rng.normal(), -1.0, 1.0);
  return a;
}

nn::GradPack critic_loss_gradient(const nn::MlpNet& critic, const Eigen::MatrixXd& inputs,
                                  const Eigen::RowVectorXd& targets, double& loss) {
  const nn::ForwardTape tape = nn::forward_tape(critic, inputs);
  const Eigen::RowVectorXd diff = tape.output().row(0) - targets;
  const double v = static_cast<double>(inputs.cols());
  loss = diff.squaredNorm() / v;
  const Eigen::MatrixXd upstream = (2.0 / v) * diff;
  return nn::backward(critic, tape, upstream);
}

nn::GradPack policy_gradient(const nn::MlpNet& actor, const nn::MlpNet& critic,
                             const Eigen::MatrixXd& own_obs, Eigen::MatrixXd critic_inputs,
                             Eigen::Index action_offset, double& mean_q) {
  const Eigen::Index len = actor.output_width();
  const Eigen::Index v = own_obs.cols();
  if (critic_inputs.cols() != v || action_offset + len > critic_inputs.rows())
    throw std::invalid_argument("policy_gradient: critic input does not fit the action slot");

  const nn::ForwardTape actor_tape = nn::forward_tape(actor, own_obs);
  critic_inputs.middleRows(action_offset, len) = actor_tape.output();
  const nn::ForwardTape critic_tape = nn::forward_tape(critic, critic_inputs);
  mean_q = critic_tape.output().mean();

  const Eigen::MatrixXd upstream =
      Eigen::MatrixXd::Constant(1, v, -1.0 / static_cast<double>(v));
  const nn::GradPack dq = nn::backward(critic, critic_tape, upstream);
  return nn::backward(actor, actor_tape, dq.input.middleRows(action_offset, len));
}

namespace {

void ensure_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os << what << " is not finite (" << value << ")";
    throw std::runtime_error(os.str());
  }
}

}  // namespace

double critic_regression_step(AgentPack& agent, const Eigen::MatrixXd& inputs,
                              const Eigen::RowVectorXd& targets, double grad_clip) {
  double loss = 0.0;
  nn::GradPack g = critic_loss_gradient(agent.critic, inputs, targets, loss);
  ensure_finite(loss, "critic loss");
  if (!g.all_finite()) throw std::runtime_error("critic gradient is not finite");
  nn::clip_global_norm(g, grad_clip);
  nn::adam_step(agent.critic_opt, agent.critic, g);
  return loss;
}

double policy_ascent_step(AgentPack& agent, const Eigen::MatrixXd& own_obs,
                          const Eigen::MatrixXd& critic_inputs, Eigen::Index action_offset,
                          double grad_clip) {
  double mean_q = 0.0;
  nn::GradPack g =
      policy_gradient(agent.actor, agent.critic, own_obs, critic_inputs, action_offset, mean_q);
  ensure_finite(mean_q, "actor objective");
  if (!g.all_finite()) throw std::runtime_error("actor gradient is not finite");
  nn::clip_global_norm(g, grad_clip);
  nn::adam_step(agent.actor_opt, agent.actor, g);
  return mean_q;
}

void sync_agent_targets(AgentPack& agent, double tau) {
  nn::soft_update(agent.target_actor, agent.actor, tau);
  nn::soft_update(agent.target_critic, agent.critic, tau);
}

}  // namespace cara::marl
