#include "cara/env/radio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cara::env {

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }
double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

double pathloss_db(const Station& station, const Position& vue) {
  const double d = std::max(distance_m(station.position, vue), kMinDistanceM);
  return station.pathloss_a_db + station.pathloss_b_db * std::log10(d);
}

double link_gain(const Station& station, const Position& vue) {
  return std::pow(10.0, -pathloss_db(station, vue) / 10.0);
}

double noise_mw(const Station& station, double noise_density_dbm_hz) {
  return station.bandwidth_hz * dbm_to_mw(noise_density_dbm_hz);
}

ChannelOccupancy::ChannelOccupancy(const Topology& topology,
                                   const GrantTable& grants)
    : stride_(static_cast<std::size_t>(
          std::max(topology.params().shared_channels,
                   topology.params().mmwave_channels))),
      active_(topology.station_count() * stride_, 0) {
  for (const Grant& g : grants.rows) {
    if (!g.station) continue;
    for (int c : g.channels)
      active_[*g.station * stride_ + static_cast<std::size_t>(c)] = 1;
  }
}

double sinr(const Topology& topology, const GrantTable& grants,
            std::size_t vue, int channel) {
  return sinr(topology, grants, ChannelOccupancy(topology, grants), vue,
              channel);
}

double sinr(const Topology& topology, const GrantTable& grants,
            const ChannelOccupancy& occupancy, std::size_t vue, int channel) {
  const Grant& g = grants.rows.at(vue);
  if (!g.station || std::find(g.channels.begin(), g.channels.end(), channel) ==
                        g.channels.end())
    throw std::invalid_argument("VUE " + std::to_string(vue) +
                                " does not hold channel " +
                                std::to_string(channel));

  const Position& pos = topology.vues().at(vue);
  const std::size_t serving = *g.station;
  const Station& s = topology.station(serving);
  const ChannelPool pool = pool_of(s.tier);

  const double signal = link_gain(s, pos) * dbm_to_mw(s.tx_power_dbm);
  double interference = 0.0;
  for (std::size_t v = 0; v < topology.station_count(); ++v) {
    if (v == serving) continue;
    const Station& other = topology.station(v);
    if (pool_of(other.tier) != pool || !occupancy.active(v, channel)) continue;
    interference += link_gain(other, pos) * dbm_to_mw(other.tx_power_dbm);
  }
  const double noise = noise_mw(s, topology.params().noise_density_dbm_hz);
  return signal / (interference + noise);
}

double aggregate_sinr(const Topology& topology, const GrantTable& grants,
                      const ChannelOccupancy& occupancy, std::size_t vue) {
  double total = 0.0;
  for (int c : grants.rows.at(vue).channels)
    total += sinr(topology, grants, occupancy, vue, c);
  return total;
}

double throughput_mbps(const Topology& topology, const GrantTable& grants,
                       std::size_t vue) {
  return throughput_mbps(topology, grants, ChannelOccupancy(topology, grants),
                         vue);
}

double throughput_mbps(const Topology& topology, const GrantTable& grants,
                       const ChannelOccupancy& occupancy, std::size_t vue) {
  const Grant& g = grants.rows.at(vue);
  if (!g.station || g.channels.empty()) return 0.0;
  const double w = topology.station(*g.station).bandwidth_hz;
  double bps = 0.0;
  for (int c : g.channels)
    bps += w * std::log2(1.0 + sinr(topology, grants, occupancy, vue, c));
  return bps / 1e6;
}

double power_cost(const Topology& topology, const GrantTable& grants,
                  std::size_t vue) {
  const Grant& g = grants.rows.at(vue);
  if (!g.station) return 0.0;
  const double p = topology.station(*g.station).tx_power_dbm;
  return topology.params().power_cost * p *
         static_cast<double>(g.channels.size());
}

double revenue(const Topology& topology, double throughput_mbps,
               double power_cost) {
  return topology.params().profit_per_mbps * throughput_mbps - power_cost;
}

}  // namespace cara::env
