#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cara/env/hetvnet_env.hpp"

namespace cara::env {

std::size_t decode_station_slot(const Topology& topology, const Action& action) {
  const std::size_t slots = topology.station_count() + 1;
  return static_cast<std::size_t>(
      std::max_element(action.begin(), action.begin() + static_cast<std::ptrdiff_t>(slots)) -
      action.begin());
}

namespace {

void check_actions(const Topology& topology, const JointAction& actions) {
  if (actions.size() != topology.vue_count())
    throw std::invalid_argument("expected " + std::to_string(topology.vue_count()) +
                                " agent actions, got " + std::to_string(actions.size()));
  const std::size_t len = topology.action_length();
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i].size() != len)
      throw std::invalid_argument("action " + std::to_string(i) + " has length " +
                                  std::to_string(actions[i].size()) + ", expected " +
                                  std::to_string(len));
    for (double v : actions[i])
      if (!std::isfinite(v))
        throw std::invalid_argument("action " + std::to_string(i) +
                                    " contains a non-finite entry");
  }
}

std::vector<int> requested_channels(const Topology& topology, const Action& action,
                                    ChannelPool pool) {
  const std::size_t offset =
      pool == ChannelPool::Shared ? topology.shared_block_offset() : topology.mmwave_block_offset();
  const int n = topology.pool_size(pool);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return action[offset + static_cast<std::size_t>(a)] >
           action[offset + static_cast<std::size_t>(b)];
  });
  std::vector<int> picked;
  for (int c : order) {
    if (static_cast<int>(picked.size()) >= topology.params().max_channels) break;
    if (!(action[offset + static_cast<std::size_t>(c)] > 0.0)) break;
    picked.push_back(c);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace

GrantTable decode_and_resolve(const Topology& topology, const JointAction& actions) {
  check_actions(topology, actions);
  const std::size_t n = topology.vue_count();
  const std::size_t none_slot = topology.station_count();

  GrantTable table;
  table.rows.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Grant& g = table.rows[i];
    g.selected_slot = decode_station_slot(topology, actions[i]);
    if (g.selected_slot == none_slot) {
      g.association_failed = true;
      continue;
    }
    const Station& s = topology.station(g.selected_slot);
    if (distance_m(s.position, topology.vues()[i]) > s.radius_m) {
      g.association_failed = true;
      continue;
    }
    g.station = g.selected_slot;
    g.channels = requested_channels(topology, actions[i], pool_of(s.tier));
  }

  // Channels contested on the same station are granted to nobody.
  const std::size_t stride = static_cast<std::size_t>(
      std::max(topology.params().shared_channels, topology.params().mmwave_channels));
  std::vector<int> demand(topology.station_count() * stride, 0);
  for (const Grant& g : table.rows)
    if (g.station)
      for (int c : g.channels) ++demand[*g.station * stride + static_cast<std::size_t>(c)];
  for (int d : demand) table.collisions += (d >= 2);

  for (Grant& g : table.rows) {
    if (!g.station) continue;
    std::erase_if(g.channels, [&](int c) {
      return demand[*g.station * stride + static_cast<std::size_t>(c)] >= 2;
    });
    g.spectrum_failed = g.channels.empty();
  }
  return table;
}

}  // namespace cara::env
