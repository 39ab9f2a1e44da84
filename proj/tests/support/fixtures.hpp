#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "cara/common/rng.hpp"
#include "cara/env/hetvnet_env.hpp"
#include "cara/env/topology.hpp"

namespace cara::testkit {

inline env::Station macro_at(double x, double y) {
  return {env::Tier::Macro, {x, y}, 3000.0, 40.0, 180e3, 34.0, 40.0};
}
inline env::Station micro_at(double x, double y) {
  return {env::Tier::Micro, {x, y}, 500.0, 35.0, 180e3, 34.0, 40.0};
}
inline env::Station pico_at(double x, double y) {
  return {env::Tier::Pico, {x, y}, 100.0, 20.0, 800e6, 37.0, 30.0};
}

inline env::RadioParams radio(int s, int p, int c_bar) {
  env::RadioParams r;
  r.shared_channels = s;
  r.mmwave_channels = p;
  r.max_channels = c_bar;
  return r;
}

inline env::Topology make_topology(std::vector<env::Station> stations,
                                   std::vector<env::Position> vues, env::RadioParams r) {
  return env::Topology(std::move(stations), std::move(vues), r, 3000.0);
}

// Small layouts with N <= 3, K <= 3, S <= 2, P <= 2 used by the exhaustive
// grant oracle. VUEs are placed both inside and outside the small cells.
inline std::vector<env::Topology> oracle_suite() {
  std::vector<env::Topology> out;
  out.push_back(make_topology({macro_at(0, 0)}, {{120, 40}}, radio(1, 1, 1)));
  out.push_back(make_topology({macro_at(0, 0)}, {{120, 40}, {-300, 10}, {5, 900}}, radio(2, 1, 2)));
  out.push_back(
      make_topology({macro_at(0, 0), pico_at(30, 0)}, {{10, 5}, {80, -20}}, radio(2, 2, 2)));
  out.push_back(make_topology({macro_at(0, 0), micro_at(150, 100), pico_at(30, 0)},
                              {{10, 5}, {80, -20}, {-200, 150}}, radio(2, 2, 1)));
  out.push_back(make_topology({macro_at(0, 0), pico_at(30, 0), pico_at(-60, 40)},
                              {{0, 20}, {-40, 30}, {90, 10}}, radio(1, 2, 2)));
  out.push_back(make_topology({macro_at(0, 0), micro_at(150, 100), micro_at(-400, -100)},
                              {{100, 80}, {-300, -50}, {700, 0}}, radio(2, 1, 2)));
  out.push_back(make_topology({macro_at(0, 0), micro_at(150, 100), pico_at(30, 0)},
                              {{31, 2}, {29, -1}, {160, 90}}, radio(2, 2, 2)));
  out.push_back(make_topology({macro_at(0, 0), pico_at(0, 0), pico_at(50, 0)},
                              {{25, 0}, {20, 10}, {30, -5}}, radio(1, 1, 1)));
  return out;
}

inline env::JointAction random_actions(Rng& rng, std::size_t agents, std::size_t length) {
  env::JointAction a(agents, env::Action(length));
  for (auto& v : a)
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return a;
}

// Desk preset layout: 1 macro, 2 micro, 4 pico, 4 VUEs, S = 6, P = 3.
inline env::TopologyConfig desk_topology_config() {
  env::TopologyConfig c;
  c.macro_count = 1;
  c.micro_count = 2;
  c.pico_count = 4;
  c.vue_count = 4;
  c.radio.shared_channels = 6;
  c.radio.mmwave_channels = 3;
  c.deployment_radius_m = 500.0;
  return c;
}

inline bool fd_close(double analytic, double numeric, double rel = 1e-4, double abs = 1e-6) {
  const double diff = std::abs(analytic - numeric);
  return diff <= abs || diff <= rel * std::max(std::abs(analytic), std::abs(numeric));
}

// Central differences of f over every coordinate of x.
inline std::vector<double> central_diff(std::vector<double> x,
                                        const std::function<double(const std::vector<double>&)>& f,
                                        double h = 1e-5) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = f(x);
    x[i] = keep - h;
    const double down = f(x);
    x[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

}  // namespace cara::testkit
