#include "cara/marl/agent_io.hpp"

#include <fstream>
#include <stdexcept>

#include "cara/nn/serialize.hpp"

namespace cara::marl {

namespace fs = std::filesystem;

fs::path agent_dir(const fs::path& root, std::size_t index) {
  return root / ("agent_" + std::to_string(index));
}

void save_agent_pack(const fs::path& dir, const AgentPack& pack, std::string_view algorithm) {
  fs::create_directories(dir);
  nn::save_net(dir / "actor.bin", "actor", algorithm, pack.actor);
  nn::save_net(dir / "target_actor.bin", "target_actor", algorithm, pack.target_actor);
  nn::save_net(dir / "critic.bin", "critic", algorithm, pack.critic);
  nn::save_net(dir / "target_critic.bin", "target_critic", algorithm, pack.target_critic);
  nn::save_adam(dir / "actor_opt.bin", "actor_opt", algorithm, pack.actor_opt);
  nn::save_adam(dir / "critic_opt.bin", "critic_opt", algorithm, pack.critic_opt);
}

AgentPack load_agent_pack(const fs::path& dir, const AgentPack& like) {
  AgentPack p;
  p.actor = nn::load_net(dir / "actor.bin", like.actor.dims());
  p.target_actor = nn::load_net(dir / "target_actor.bin", like.target_actor.dims());
  p.critic = nn::load_net(dir / "critic.bin", like.critic.dims());
  p.target_critic = nn::load_net(dir / "target_critic.bin", like.target_critic.dims());
  p.actor_opt = nn::load_adam(dir / "actor_opt.bin", p.actor);
  p.critic_opt = nn::load_adam(dir / "critic_opt.bin", p.critic);
  return p;
}

void save_rng_streams(const fs::path& path, const std::map<std::string, const Rng*>& streams) {
  nn::FileHeader h{"CARARNG 1", {}};
  for (const auto& [name, rng] : streams) h.fields[name] = rng->state();
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  nn::write_header(os, h);
}

void load_rng_streams(const fs::path& path, const std::map<std::string, Rng*>& streams) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  const nn::FileHeader h = nn::read_header(is, "CARARNG 1");
  for (const auto& [name, rng] : streams) rng->set_state(h.at(name));
}

void save_replay(const fs::path& path, const ReplayBuffer& buffer) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  buffer.write(os);
}

void load_replay(const fs::path& path, ReplayBuffer& buffer) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  buffer.read(is);
}

}  // namespace cara::marl
