#include "cara/baselines/actor_critic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "cara/marl/agent_io.hpp"
#include "cara/marl/policy_gradient.hpp"
#include "cara/nn/serialize.hpp"

namespace cara::baselines {

VanillaAcAgent make_ac_agent(int action_length, const std::vector<int>& hidden,
                             double learning_rate, std::uint64_t seed) {
  std::vector<int> actor_dims{2};
  actor_dims.insert(actor_dims.end(), hidden.begin(), hidden.end());
  actor_dims.push_back(action_length);
  std::vector<int> value_dims{2};
  value_dims.insert(value_dims.end(), hidden.begin(), hidden.end());
  value_dims.push_back(1);

  VanillaAcAgent a;
  a.actor = nn::MlpNet::init(actor_dims, nn::OutputActivation::Tanh, mix_seed(seed, 1));
  a.value = nn::MlpNet::init(value_dims, nn::OutputActivation::Identity, mix_seed(seed, 2));
  a.actor_opt = nn::AdamState(a.actor, {learning_rate});
  a.value_opt = nn::AdamState(a.value, {learning_rate});
  return a;
}

nn::GradPack value_td_gradient(const nn::MlpNet& value, const AcTransition& t, double gamma,
                               double& loss) {
  const double target = t.reward + gamma * value.forward(t.obs_next)[0];
  const nn::ForwardTape tape = nn::forward_tape(value, t.obs);
  const double diff = tape.output()(0, 0) - target;
  loss = diff * diff;
  return nn::backward(value, tape, Eigen::MatrixXd::Constant(1, 1, 2.0 * diff));
}

nn::GradPack actor_advantage_gradient(const nn::MlpNet& actor, const AcTransition& t,
                                      double advantage) {
  const nn::ForwardTape tape = nn::forward_tape(actor, t.obs);
  // d/dmu log N(a; mu, s^2) = (a - mu) / s^2; negated for descent.
  const Eigen::MatrixXd upstream =
      -advantage * (t.action - tape.output().col(0)) / (kPolicyStd * kPolicyStd);
  return nn::backward(actor, tape, upstream);
}

AcUpdateResult ac_update(VanillaAcAgent& agent, const AcTransition& t, double gamma,
                         double grad_clip) {
  AcUpdateResult r;
  r.advantage = t.reward + gamma * agent.value.forward(t.obs_next)[0] - agent.value.forward(t.obs)[0];
  if (!std::isfinite(r.advantage)) throw std::runtime_error("advantage is not finite");

  nn::GradPack gv = value_td_gradient(agent.value, t, gamma, r.value_loss);
  nn::GradPack ga = actor_advantage_gradient(agent.actor, t, r.advantage);
  if (!gv.all_finite() || !ga.all_finite())
    throw std::runtime_error("actor-critic gradient is not finite");
  nn::clip_global_norm(gv, grad_clip);
  nn::clip_global_norm(ga, grad_clip);
  nn::adam_step(agent.value_opt, agent.value, gv);
  nn::adam_step(agent.actor_opt, agent.actor, ga);
  return r;
}

VanillaAcLearner::VanillaAcLearner(std::size_t agents, int action_length,
                                   const marl::TrainerConfig& cfg)
    : cfg_(cfg) {
  cfg_.validate();
  for (std::size_t k = 0; k < agents; ++k) {
    agents_.push_back(
        make_ac_agent(action_length, cfg.hidden, cfg.learning_rate, marl::agent_seed(cfg.seed, k)));
    exploration_.emplace_back(marl::exploration_seed(cfg.seed, k));
  }
}

env::JointAction VanillaAcLearner::act(const env::JointObservation& obs, double /*noise_scale*/) {
  const std::vector<double> x = obs.flatten();
  env::JointAction actions(agents_.size());
  for (std::size_t k = 0; k < agents_.size(); ++k) {
    const Eigen::VectorXd a = marl::select_action(
        agents_[k].actor, std::span(x).subspan(2 * k, 2), kPolicyStd, exploration_[k]);
    actions[k].assign(a.data(), a.data() + a.size());
  }
  return actions;
}

void VanillaAcLearner::observe(const env::JointObservation& obs, const env::JointAction& actions,
                               const env::StepOutcome& outcome) {
  for (std::size_t k = 0; k < agents_.size(); ++k) {
    AcTransition t;
    t.obs = {double(obs.bits[k].qos), double(obs.bits[k].dl)};
    t.action = Eigen::Map<const Eigen::VectorXd>(actions[k].data(),
                                                 static_cast<Eigen::Index>(actions[k].size()));
    t.reward = outcome.rewards[k];
    t.obs_next = {double(outcome.observations.bits[k].qos),
                  double(outcome.observations.bits[k].dl)};
    ac_update(agents_[k], t, cfg_.gamma, cfg_.grad_clip);
  }
}

void VanillaAcLearner::save(const std::filesystem::path& dir) const {
  std::map<std::string, const Rng*> streams;
  for (std::size_t k = 0; k < agents_.size(); ++k) {
    const auto d = marl::agent_dir(dir, k);
    std::filesystem::create_directories(d);
    nn::save_net(d / "actor.bin", "actor", algorithm(), agents_[k].actor);
    nn::save_net(d / "value.bin", "value", algorithm(), agents_[k].value);
    nn::save_adam(d / "actor_opt.bin", "actor_opt", algorithm(), agents_[k].actor_opt);
    nn::save_adam(d / "value_opt.bin", "value_opt", algorithm(), agents_[k].value_opt);
    streams["explore." + std::to_string(k)] = &exploration_[k];
  }
  marl::save_rng_streams(dir / "rng.state", streams);
}

void VanillaAcLearner::load(const std::filesystem::path& dir) {
  std::map<std::string, Rng*> streams;
  for (std::size_t k = 0; k < agents_.size(); ++k) {
    const auto d = marl::agent_dir(dir, k);
    VanillaAcAgent& a = agents_[k];
    a.actor = nn::load_net(d / "actor.bin", a.actor.dims());
    a.value = nn::load_net(d / "value.bin", a.value.dims());
    a.actor_opt = nn::load_adam(d / "actor_opt.bin", a.actor);
    a.value_opt = nn::load_adam(d / "value_opt.bin", a.value);
    streams["explore." + std::to_string(k)] = &exploration_[k];
  }
  marl::load_rng_streams(dir / "rng.state", streams);
}

bool VanillaAcLearner::finite() const {
  return std::all_of(agents_.begin(), agents_.end(),
                     [](const VanillaAcAgent& a) { return a.all_finite(); });
}

}  // namespace cara::baselines
