#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

#include "cara/common/rng.hpp"
#include "cara/nn/adam.hpp"
#include "cara/nn/mlp.hpp"

namespace cara::marl {

/// Behavior and target actor/critic for one agent plus optimizer state.
struct AgentPack {
  nn::MlpNet actor;
  nn::MlpNet target_actor;
  nn::MlpNet critic;
  nn::MlpNet target_critic;
  nn::AdamState actor_opt;
  nn::AdamState critic_opt;

  int action_length() const { return actor.output_width(); }
  bool all_finite() const;
};

/// Actor: obs -> tanh action; critic: critic_width -> scalar. Targets start as
/// exact copies of the behavior networks.
AgentPack make_agent_pack(int obs_width, int action_length, int critic_width,
                          const std::vector<int>& hidden, double learning_rate,
                          std::uint64_t seed);

// Seed of agent `index` within a run; independent of the algorithm so that
// every learner starts from the same networks for the same run seed.
std::uint64_t agent_seed(std::uint64_t run_seed, std::size_t index);
std::uint64_t exploration_seed(std::uint64_t run_seed, std::size_t index);

/// mu(obs) + N(0, noise_scale^2) per component, clamped to [-1, 1].
Eigen::VectorXd select_action(const nn::MlpNet& actor, std::span<const double> obs,
                              double noise_scale, Rng& rng);

/// Gradient of (1/V) sum (y - Q(inputs))^2 with respect to critic parameters.
nn::GradPack critic_loss_gradient(const nn::MlpNet& critic, const Eigen::MatrixXd& inputs,
                                  const Eigen::RowVectorXd& targets, double& loss);

/// Gradient of -(1/V) sum Q(inputs with rows [offset, offset + L) replaced by
/// actor(own_obs)) with respect to the actor parameters. The input slice of
/// the returned pack is d(-mean Q)/d(own_obs).
nn::GradPack policy_gradient(const nn::MlpNet& actor, const nn::MlpNet& critic,
                             const Eigen::MatrixXd& own_obs, Eigen::MatrixXd critic_inputs,
                             Eigen::Index action_offset, double& mean_q);

// One clipped Adam step on the behavior critic; returns the loss before it.
double critic_regression_step(AgentPack& agent, const Eigen::MatrixXd& inputs,
                              const Eigen::RowVectorXd& targets, double grad_clip);

// One clipped Adam ascent step on the behavior actor; returns mean Q before it.
double policy_ascent_step(AgentPack& agent, const Eigen::MatrixXd& own_obs,
                          const Eigen::MatrixXd& critic_inputs, Eigen::Index action_offset,
                          double grad_clip);

// Soft update of both target networks of one agent.
void sync_agent_targets(AgentPack& agent, double tau);

}  // namespace cara::marl
