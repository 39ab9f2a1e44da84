#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cara/common/rng.hpp"

namespace cara::env {

enum class Tier : std::uint8_t { Macro, Micro, Pico };

// Macro and micro stations draw from the shared orthogonal pool; picos from
// the mmWave pool.
enum class ChannelPool : std::uint8_t { Shared, MmWave };

constexpr ChannelPool pool_of(Tier tier) {
  return tier == Tier::Pico ? ChannelPool::MmWave : ChannelPool::Shared;
}

const char* to_string(Tier tier);

struct Position {
  double x_m = 0.0;
  double y_m = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

double distance_m(const Position& a, const Position& b);

struct Station {
  Tier tier = Tier::Macro;
  Position position;
  double radius_m = 0.0;
  double tx_power_dbm = 0.0;  // per channel
  double bandwidth_hz = 0.0;  // per channel
  double pathloss_a_db = 0.0;
  double pathloss_b_db = 0.0;
};

/// Scalar parameters of the radio and reward model shared by all stations.
struct RadioParams {
  int shared_channels = 30;
  int mmwave_channels = 5;
  int max_channels = 2;
  double qos_threshold_db = 7.0;
  double noise_density_dbm_hz = -175.0;
  double power_cost = 1e-3;        // rho, per dBm of granted channel power
  double profit_per_mbps = 1e-3;   // eta
  double failure_penalty = 1e-2;   // Upsilon
};

/// Immutable network layout: stations in macro, micro, pico order plus the
/// current VUE positions.
class Topology {
 public:
  // Throws std::invalid_argument when any layout invariant is violated.
  Topology(std::vector<Station> stations, std::vector<Position> vues,
           RadioParams params, double deployment_radius_m);

  const std::vector<Station>& stations() const { return stations_; }
  const Station& station(std::size_t k) const { return stations_.at(k); }
  const std::vector<Position>& vues() const { return vues_; }
  const RadioParams& params() const { return params_; }
  double deployment_radius_m() const { return deployment_radius_m_; }

  std::size_t station_count() const { return stations_.size(); }
  std::size_t vue_count() const { return vues_.size(); }
  std::size_t count(Tier tier) const;
  int pool_size(ChannelPool pool) const;

  // (K + 1) station slots, then S shared, then P mmWave preferences.
  std::size_t action_length() const;
  std::size_t shared_block_offset() const { return stations_.size() + 1; }
  std::size_t mmwave_block_offset() const {
    return stations_.size() + 1 + static_cast<std::size_t>(params_.shared_channels);
  }

  // Same stations and parameters with a new VUE placement.
  Topology with_vues(std::vector<Position> vues) const;

 private:
  std::vector<Station> stations_;
  std::vector<Position> vues_;
  RadioParams params_;
  double deployment_radius_m_;
};

/// Station counts and per-tier constants used to lay out a topology.
struct TopologyConfig {
  int macro_count = 1;
  int micro_count = 10;
  int pico_count = 50;
  int vue_count = 100;

  double macro_radius_m = 3000.0;
  double micro_radius_m = 500.0;
  double pico_radius_m = 100.0;

  double macro_power_dbm = 40.0;
  double micro_power_dbm = 35.0;
  double pico_power_dbm = 20.0;

  double shared_bandwidth_hz = 180e3;
  double mmwave_bandwidth_hz = 800e6;

  double shared_pathloss_a_db = 34.0;
  double shared_pathloss_b_db = 40.0;
  double mmwave_pathloss_a_db = 37.0;
  double mmwave_pathloss_b_db = 30.0;

  // Radius of the disc (centred on the first macro) in which micro, pico and
  // VUE positions are drawn. Zero means the macro coverage radius.
  double deployment_radius_m = 0.0;

  RadioParams radio;

  void validate() const;
  double effective_deployment_radius_m() const {
    return deployment_radius_m > 0.0 ? deployment_radius_m : macro_radius_m;
  }
};

// Uniform point in a disc of `radius_m` around `centre`.
Position draw_in_disc(Rng& rng, const Position& centre, double radius_m);

/// Lays out stations and an initial VUE placement from `seed`.
Topology build_topology(const TopologyConfig& cfg, std::uint64_t seed);

std::vector<Position> draw_vue_positions(const Topology& topology,
                                         std::uint64_t seed);

}  // namespace cara::env
