#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "cara/common/rng.hpp"
#include "cara/marl/policy_gradient.hpp"
#include "cara/marl/replay_buffer.hpp"

namespace cara::marl {

// <dir>/{actor,target_actor,critic,target_critic,actor_opt,critic_opt}.bin
void save_agent_pack(const std::filesystem::path& dir, const AgentPack& pack,
                     std::string_view algorithm);

// `like` provides the expected shapes; mismatches throw std::runtime_error
// naming expected and actual widths.
AgentPack load_agent_pack(const std::filesystem::path& dir, const AgentPack& like);

std::filesystem::path agent_dir(const std::filesystem::path& root, std::size_t index);

// Text file of named engine states ("rng.state").
void save_rng_streams(const std::filesystem::path& path,
                      const std::map<std::string, const Rng*>& streams);
void load_rng_streams(const std::filesystem::path& path, const std::map<std::string, Rng*>& streams);

void save_replay(const std::filesystem::path& path, const ReplayBuffer& buffer);
void load_replay(const std::filesystem::path& path, ReplayBuffer& buffer);

}  // namespace cara::marl
