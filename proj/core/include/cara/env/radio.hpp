#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cara/env/topology.hpp"

namespace cara::env {

constexpr double kMinDistanceM = 1.0;

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);
double linear_to_db(double ratio);

// PL = a + b * log10(max(d, 1 m)), in dB.
double pathloss_db(const Station& station, const Position& vue);

// Linear power gain 10^(-PL/10).
double link_gain(const Station& station, const Position& vue);

// W * N0 for one channel of `station`, in mW.
double noise_mw(const Station& station, double noise_density_dbm_hz);

/// Per-VUE association outcome.
struct Grant {
  std::optional<std::size_t> station;  // set only when association succeeded
  std::size_t selected_slot = 0;       // decoded argmax slot; K means "none"
  std::vector<int> channels;           // ascending, within the station's pool
  bool association_failed = false;
  bool spectrum_failed = false;

  bool failed() const { return association_failed || spectrum_failed; }
  friend bool operator==(const Grant&, const Grant&) = default;
};

struct GrantTable {
  std::vector<Grant> rows;
  // Number of (station, channel) pairs requested by two or more VUEs.
  int collisions = 0;

  friend bool operator==(const GrantTable&, const GrantTable&) = default;
};

/// Which (station, channel) pairs are transmitting under a grant table.
class ChannelOccupancy {
 public:
  ChannelOccupancy(const Topology& topology, const GrantTable& grants);

  bool active(std::size_t station, int channel) const {
    return active_[station * stride_ + static_cast<std::size_t>(channel)] != 0;
  }

 private:
  std::size_t stride_;
  std::vector<char> active_;
};

// Linear SINR of `vue` on `channel`. Throws std::invalid_argument when the
// VUE does not hold that channel.
double sinr(const Topology& topology, const GrantTable& grants,
            std::size_t vue, int channel);
double sinr(const Topology& topology, const GrantTable& grants,
            const ChannelOccupancy& occupancy, std::size_t vue, int channel);

// Sum of per-channel linear SINRs over the VUE's granted channels.
double aggregate_sinr(const Topology& topology, const GrantTable& grants,
                      const ChannelOccupancy& occupancy, std::size_t vue);

double throughput_mbps(const Topology& topology, const GrantTable& grants,
                       std::size_t vue);
double throughput_mbps(const Topology& topology, const GrantTable& grants,
                       const ChannelOccupancy& occupancy, std::size_t vue);

double power_cost(const Topology& topology, const GrantTable& grants,
                  std::size_t vue);

double revenue(const Topology& topology, double throughput_mbps,
               double power_cost);

}  // namespace cara::env
