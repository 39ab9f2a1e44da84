#include "cara/env/topology.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cara::env {

const char* to_string(Tier tier) {
  switch (tier) {
    case Tier::Macro:
      return "macro";
    case Tier::Micro:
      return "micro";
    case Tier::Pico:
      return "pico";
  }
  return "unknown";
}

double distance_m(const Position& a, const Position& b) {
  return std::hypot(a.x_m - b.x_m, a.y_m - b.y_m);
}

Topology::Topology(std::vector<Station> stations, std::vector<Position> vues,
                   RadioParams params, double deployment_radius_m)
    : stations_(std::move(stations)),
      vues_(std::move(vues)),
      params_(params),
      deployment_radius_m_(deployment_radius_m) {
  if (stations_.empty()) throw std::invalid_argument("topology has no stations");
  if (stations_.front().tier != Tier::Macro)
    throw std::invalid_argument("first station must be a macro station");
  if (vues_.empty()) throw std::invalid_argument("topology has no VUEs");
  if (params_.shared_channels < 1 || params_.mmwave_channels < 1 ||
      params_.max_channels < 1)
    throw std::invalid_argument("channel counts S, P and c_bar must be >= 1");

  auto rank = [](Tier t) { return static_cast<int>(t); };
  for (std::size_t k = 0; k < stations_.size(); ++k) {
    const Station& s = stations_[k];
    if (!(s.radius_m > 0.0) || !(s.bandwidth_hz > 0.0))
      throw std::invalid_argument("station " + std::to_string(k) +
                                  ": radius and bandwidth must be positive");
    if (k > 0 && rank(s.tier) < rank(stations_[k - 1].tier))
      throw std::invalid_argument(
          "stations must be ordered macro, micro, pico (violated at index " +
          std::to_string(k) + ")");
  }
  if (!(deployment_radius_m_ > 0.0) ||
      deployment_radius_m_ > stations_.front().radius_m)
    throw std::invalid_argument(
        "deployment radius must be positive and within macro coverage");

  const Station& macro = stations_.front();
  for (std::size_t i = 0; i < vues_.size(); ++i) {
    if (distance_m(vues_[i], macro.position) > macro.radius_m)
      throw std::invalid_argument("VUE " + std::to_string(i) +
                                  " lies outside macro coverage");
  }
}

std::size_t Topology::count(Tier tier) const {
  std::size_t n = 0;
  for (const Station& s : stations_) n += (s.tier == tier);
  return n;
}

int Topology::pool_size(ChannelPool pool) const {
  return pool == ChannelPool::Shared ? params_.shared_channels
                                     : params_.mmwave_channels;
}

std::size_t Topology::action_length() const {
  return stations_.size() + 1 +
         static_cast<std::size_t>(params_.shared_channels) +
         static_cast<std::size_t>(params_.mmwave_channels);
}

Topology Topology::with_vues(std::vector<Position> vues) const {
  return Topology(stations_, std::move(vues), params_, deployment_radius_m_);
}

void TopologyConfig::validate() const {
  if (macro_count < 1 || micro_count < 1 || pico_count < 1 || vue_count < 1)
    throw std::invalid_argument(
        "station and VUE counts must all be positive");
  if (radio.max_channels < 1)
    throw std::invalid_argument("max_channels (c_bar) must be >= 1");
  if (radio.shared_channels < 1 || radio.mmwave_channels < 1)
    throw std::invalid_argument("channel pools S and P must be >= 1");
  if (!(macro_radius_m > 0.0) || !(micro_radius_m > 0.0) ||
      !(pico_radius_m > 0.0))
    throw std::invalid_argument("cell radii must be positive");
  if (!(shared_bandwidth_hz > 0.0) || !(mmwave_bandwidth_hz > 0.0))
    throw std::invalid_argument("channel bandwidths must be positive");
  if (deployment_radius_m < 0.0 || deployment_radius_m > macro_radius_m)
    throw std::invalid_argument(
        "deployment_radius must lie in [0, macro radius]");
  if (!(radio.profit_per_mbps > 0.0))
    throw std::invalid_argument("profit per Mbps (eta) must be positive");
  if (radio.power_cost < 0.0 || radio.failure_penalty < 0.0)
    throw std::invalid_argument("power cost and failure penalty must be >= 0");
}

Position draw_in_disc(Rng& rng, const Position& centre, double radius_m) {
  const double r = radius_m * std::sqrt(rng.uniform());
  const double theta = 2.0 * std::numbers::pi * rng.uniform();
  return {centre.x_m + r * std::cos(theta), centre.y_m + r * std::sin(theta)};
}

namespace {

Station make_station(const TopologyConfig& cfg, Tier tier, Position pos) {
  Station s;
  s.tier = tier;
  s.position = pos;
  const bool shared = pool_of(tier) == ChannelPool::Shared;
  s.bandwidth_hz = shared ? cfg.shared_bandwidth_hz : cfg.mmwave_bandwidth_hz;
  s.pathloss_a_db = shared ? cfg.shared_pathloss_a_db : cfg.mmwave_pathloss_a_db;
  s.pathloss_b_db = shared ? cfg.shared_pathloss_b_db : cfg.mmwave_pathloss_b_db;
  switch (tier) {
    case Tier::Macro:
      s.radius_m = cfg.macro_radius_m;
      s.tx_power_dbm = cfg.macro_power_dbm;
      break;
    case Tier::Micro:
      s.radius_m = cfg.micro_radius_m;
      s.tx_power_dbm = cfg.micro_power_dbm;
      break;
    case Tier::Pico:
      s.radius_m = cfg.pico_radius_m;
      s.tx_power_dbm = cfg.pico_power_dbm;
      break;
  }
  return s;
}

std::vector<Position> draw_vues(Rng& rng, const Position& centre,
                                double radius_m, std::size_t n) {
  std::vector<Position> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(draw_in_disc(rng, centre, radius_m));
  return out;
}

}  // namespace

Topology build_topology(const TopologyConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(mix_seed(seed, 0x70b0));
  const Position origin{};
  const double area = cfg.effective_deployment_radius_m();

  std::vector<Station> stations;
  stations.reserve(static_cast<std::size_t>(cfg.macro_count + cfg.micro_count +
                                            cfg.pico_count));
  stations.push_back(make_station(cfg, Tier::Macro, origin));
  for (int k = 1; k < cfg.macro_count; ++k)
    stations.push_back(
        make_station(cfg, Tier::Macro, draw_in_disc(rng, origin, area)));
  for (int k = 0; k < cfg.micro_count; ++k)
    stations.push_back(
        make_station(cfg, Tier::Micro, draw_in_disc(rng, origin, area)));
  for (int k = 0; k < cfg.pico_count; ++k)
    stations.push_back(
        make_station(cfg, Tier::Pico, draw_in_disc(rng, origin, area)));

  auto vues =
      draw_vues(rng, origin, area, static_cast<std::size_t>(cfg.vue_count));
  return Topology(std::move(stations), std::move(vues), cfg.radio, area);
}

std::vector<Position> draw_vue_positions(const Topology& topology,
                                         std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x5eed));
  return draw_vues(rng, topology.station(0).position,
                   topology.deployment_radius_m(), topology.vue_count());
}

}  // namespace cara::env
