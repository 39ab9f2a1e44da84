#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cara/env/radio.hpp"
#include "cara/env/topology.hpp"

namespace cara::env {

using Action = std::vector<double>;
using JointAction = std::vector<Action>;

struct ObservationBits {
  std::uint8_t qos = 0;
  std::uint8_t dl = 0;

  friend bool operator==(const ObservationBits&, const ObservationBits&) = default;
};

struct JointObservation {
  std::vector<ObservationBits> bits;

  // (qos_1, dl_1, ..., qos_N, dl_N) as reals; this is the critic state x.
  std::vector<double> flatten() const;

  friend bool operator==(const JointObservation&, const JointObservation&) = default;
};

struct StepOutcome {
  JointObservation observations;
  std::vector<double> rewards;
  std::vector<double> throughputs_mbps;
  std::vector<double> power_costs;
  GrantTable grants;

  friend bool operator==(const StepOutcome&, const StepOutcome&) = default;
};

/// Decodes continuous preferences into association and channel grants.
///
/// Per VUE the station block argmax picks a station or the trailing "none"
/// slot. A station farther than its radius is an association failure. The
/// top positive preferences of the matching pool are requested (at most
/// c_bar, ties broken by lower channel index), and any (station, channel)
/// requested by two or more VUEs is dropped for all of them. An associated
/// VUE left with no channel is a spectrum failure.
///
/// Throws std::invalid_argument on agent count or length mismatch and on
/// non-finite preferences.
GrantTable decode_and_resolve(const Topology& topology,
                              const JointAction& actions);

// Index of the first maximum in the station block.
std::size_t decode_station_slot(const Topology& topology, const Action& action);

// Rewards, throughputs and observation bits for one step over a fixed
// placement. `previous_throughput` holds last step's values (Mbps) and is
// overwritten with this step's.
StepOutcome evaluate_step(const Topology& topology, const JointAction& actions,
                          std::vector<double>& previous_throughput);

class HetVNetEnv {
 public:
  explicit HetVNetEnv(Topology topology);

  /// Redraws VUE positions from `seed`, clears throughput memory and returns
  /// the all-zero observation.
  JointObservation reset(std::uint64_t seed);

  /// Throws std::logic_error when called before reset().
  StepOutcome step(const JointAction& actions);

  const Topology& topology() const { return topology_; }
  std::size_t agent_count() const { return topology_.vue_count(); }
  std::size_t action_length() const { return topology_.action_length(); }
  bool is_reset() const { return ready_; }

 private:
  Topology topology_;
  std::vector<double> previous_throughput_;
  bool ready_ = false;
};

}  // namespace cara::env
