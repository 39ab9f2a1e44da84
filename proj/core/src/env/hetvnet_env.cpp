#include "cara/env/hetvnet_env.hpp"

#include <stdexcept>

namespace cara::env {

std::vector<double> JointObservation::flatten() const {
  std::vector<double> x;
  x.reserve(2 * bits.size());
  for (const ObservationBits& b : bits) {
    x.push_back(static_cast<double>(b.qos));
    x.push_back(static_cast<double>(b.dl));
  }
  return x;
}

HetVNetEnv::HetVNetEnv(Topology topology)
    : topology_(std::move(topology)),
      previous_throughput_(topology_.vue_count(), 0.0) {}

JointObservation HetVNetEnv::reset(std::uint64_t seed) {
  topology_ = topology_.with_vues(draw_vue_positions(topology_, seed));
  previous_throughput_.assign(topology_.vue_count(), 0.0);
  ready_ = true;
  return JointObservation{std::vector<ObservationBits>(topology_.vue_count())};
}

StepOutcome evaluate_step(const Topology& topology, const JointAction& actions,
                          std::vector<double>& previous_throughput) {
  if (previous_throughput.size() != topology.vue_count())
    throw std::invalid_argument("throughput memory does not match the VUE count");
  const RadioParams& params = topology.params();
  StepOutcome out;
  out.grants = decode_and_resolve(topology, actions);
  const ChannelOccupancy occupancy(topology, out.grants);

  const std::size_t n = topology.vue_count();
  out.rewards.resize(n);
  out.throughputs_mbps.resize(n);
  out.power_costs.resize(n);
  out.observations.bits.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const Grant& g = out.grants.rows[i];
    const double zeta = throughput_mbps(topology, out.grants, occupancy, i);
    const double kappa = power_cost(topology, out.grants, i);
    const double fail = g.failed() ? params.failure_penalty : 0.0;
    out.throughputs_mbps[i] = zeta;
    out.power_costs[i] = kappa;
    out.rewards[i] = revenue(topology, zeta, kappa) - fail;

    ObservationBits& bits = out.observations.bits[i];
    if (!g.channels.empty()) {
      const double agg = aggregate_sinr(topology, out.grants, occupancy, i);
      bits.qos = linear_to_db(agg) >= params.qos_threshold_db ? 1 : 0;
    }
    bits.dl = zeta > previous_throughput[i] ? 1 : 0;
    previous_throughput[i] = zeta;
  }
  return out;
}

StepOutcome HetVNetEnv::step(const JointAction& actions) {
  if (!ready_) throw std::logic_error("HetVNetEnv::step called before reset");
  return evaluate_step(topology_, actions, previous_throughput_);
}

}  // namespace cara::env
