#include "brute_force.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace cara::testkit {

namespace {

using env::Topology;

int pool_offset(const Topology& t, env::Tier tier) {
  return tier == env::Tier::Pico ? static_cast<int>(t.mmwave_block_offset())
                                 : static_cast<int>(t.shared_block_offset());
}

int pool_len(const Topology& t, env::Tier tier) {
  return tier == env::Tier::Pico ? t.params().mmwave_channels : t.params().shared_channels;
}

std::vector<int> members(unsigned mask, int n) {
  std::vector<int> out;
  for (int c = 0; c < n; ++c)
    if (mask & (1u << c)) out.push_back(c);
  return out;
}

// Slot s such that every other slot is strictly smaller.
std::optional<std::size_t> enumerate_slot(const Topology& t, const env::Action& a) {
  const std::size_t slots = t.station_count() + 1;
  std::optional<std::size_t> found;
  for (std::size_t s = 0; s < slots; ++s) {
    bool dominates = true;
    for (std::size_t o = 0; o < slots; ++o)
      if (o != s && !(a[o] < a[s])) dominates = false;
    if (dominates) found = s;
  }
  return found;
}

// Subset R of the pool with every member positive, |R| = min(c_bar, #positive)
// and every positive non-member strictly below every member.
std::vector<std::vector<int>> enumerate_requests(const Topology& t, const env::Action& a,
                                                 env::Tier tier) {
  const int off = pool_offset(t, tier);
  const int n = pool_len(t, tier);
  int positive = 0;
  for (int c = 0; c < n; ++c) positive += a[static_cast<std::size_t>(off + c)] > 0.0 ? 1 : 0;
  const int want = std::min(positive, t.params().max_channels);

  std::vector<std::vector<int>> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    const auto r = members(mask, n);
    if (static_cast<int>(r.size()) != want) continue;
    bool ok = true;
    for (int c : r)
      if (!(a[static_cast<std::size_t>(off + c)] > 0.0)) ok = false;
    for (int c = 0; c < n && ok; ++c) {
      if (mask & (1u << c)) continue;
      const double p = a[static_cast<std::size_t>(off + c)];
      if (!(p > 0.0)) continue;
      for (int m : r)
        if (!(p < a[static_cast<std::size_t>(off + m)])) ok = false;
    }
    if (ok) out.push_back(r);
  }
  return out;
}

double mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double gain(const env::Station& s, const env::Position& p) {
  const double dx = s.position.x_m - p.x_m;
  const double dy = s.position.y_m - p.y_m;
  const double d = std::max(std::hypot(dx, dy), 1.0);
  return std::pow(10.0, -(s.pathloss_a_db + s.pathloss_b_db * std::log10(d)) / 10.0);
}

}  // namespace

bool unambiguous(const Topology& t, const env::JointAction& actions) {
  for (const auto& a : actions) {
    if (!enumerate_slot(t, a)) return false;
    for (env::Tier tier : {env::Tier::Macro, env::Tier::Pico}) {
      const int off = pool_offset(t, tier);
      const int n = pool_len(t, tier);
      for (int c = 0; c < n; ++c) {
        const double p = a[static_cast<std::size_t>(off + c)];
        if (p == 0.0) return false;
        for (int d = c + 1; d < n; ++d)
          if (p > 0.0 && p == a[static_cast<std::size_t>(off + d)]) return false;
      }
    }
  }
  return true;
}

OracleResult brute_force(const Topology& t, const env::JointAction& actions) {
  const std::size_t n = t.vue_count();
  const std::size_t k = t.station_count();
  OracleResult res;
  res.vues.resize(n);
  std::vector<std::vector<int>> requests(n);

  for (std::size_t i = 0; i < n; ++i) {
    OracleVue& v = res.vues[i];
    v.slot = enumerate_slot(t, actions[i]).value();
    if (v.slot == k) {
      v.association_failed = true;
      continue;
    }
    const env::Station& s = t.station(v.slot);
    const env::Position& p = t.vues()[i];
    if (std::hypot(s.position.x_m - p.x_m, s.position.y_m - p.y_m) > s.radius_m) {
      v.association_failed = true;
      continue;
    }
    v.station = v.slot;
    const auto cands = enumerate_requests(t, actions[i], s.tier);
    requests[i] = cands.at(0);
  }

  // Every (station, channel) pair with two or more requesters.
  for (std::size_t st = 0; st < k; ++st) {
    const int len = pool_len(t, t.station(st).tier);
    for (int c = 0; c < len; ++c) {
      int askers = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (res.vues[i].station == st)
          for (int r : requests[i]) askers += r == c ? 1 : 0;
      res.collisions += askers >= 2 ? 1 : 0;
    }
  }

  // Joint grant: walk every combination of per-VUE subsets of the requests
  // and keep the one where a channel is held iff no co-station VUE asked.
  std::vector<unsigned> radix(n);
  std::size_t combos = 1;
  for (std::size_t i = 0; i < n; ++i) {
    radix[i] = 1u << requests[i].size();
    combos *= radix[i];
  }
  int matches = 0;
  for (std::size_t code = 0; code < combos; ++code) {
    std::vector<std::vector<int>> held(n);
    std::size_t rest = code;
    for (std::size_t i = 0; i < n; ++i) {
      const unsigned mask = static_cast<unsigned>(rest % radix[i]);
      rest /= radix[i];
      for (std::size_t b = 0; b < requests[i].size(); ++b)
        if (mask & (1u << b)) held[i].push_back(requests[i][b]);
    }
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (int c : requests[i]) {
        bool contested = false;
        for (std::size_t j = 0; j < n; ++j)
          if (j != i && res.vues[j].station && res.vues[j].station == res.vues[i].station)
            for (int r : requests[j]) contested |= r == c;
        const bool holds = std::find(held[i].begin(), held[i].end(), c) != held[i].end();
        if (holds == contested) ok = false;
      }
    if (!ok) continue;
    ++matches;
    for (std::size_t i = 0; i < n; ++i) {
      std::sort(held[i].begin(), held[i].end());
      res.vues[i].channels = held[i];
    }
  }
  if (matches != 1) throw std::logic_error("joint grant enumeration not unique");

  const auto& rp = t.params();
  for (std::size_t i = 0; i < n; ++i) {
    OracleVue& v = res.vues[i];
    if (v.station && v.channels.empty()) v.spectrum_failed = true;
    if (!v.station) {
      v.reward = -rp.failure_penalty;
      continue;
    }
    const env::Station& s = t.station(*v.station);
    const env::Position& p = t.vues()[i];
    double bps = 0.0;
    double agg = 0.0;
    for (int c : v.channels) {
      double interference = 0.0;
      for (std::size_t st = 0; st < k; ++st) {
        if (st == *v.station || env::pool_of(t.station(st).tier) != env::pool_of(s.tier)) continue;
        bool on = false;
        for (std::size_t j = 0; j < n; ++j)
          if (res.vues[j].station == st)
            on |= std::find(res.vues[j].channels.begin(), res.vues[j].channels.end(), c) !=
                  res.vues[j].channels.end();
        if (on) interference += gain(t.station(st), p) * mw(t.station(st).tx_power_dbm);
      }
      const double snr =
          gain(s, p) * mw(s.tx_power_dbm) / (interference + s.bandwidth_hz * mw(rp.noise_density_dbm_hz));
      agg += snr;
      bps += s.bandwidth_hz * std::log2(1.0 + snr);
    }
    v.throughput_mbps = bps / 1e6;
    v.power_cost = rp.power_cost * s.tx_power_dbm * static_cast<double>(v.channels.size());
    v.reward = rp.profit_per_mbps * v.throughput_mbps - v.power_cost -
               (v.spectrum_failed ? rp.failure_penalty : 0.0);
    v.qos = !v.channels.empty() && 10.0 * std::log10(agg) >= rp.qos_threshold_db ? 1 : 0;
  }
  return res;
}

std::optional<std::string> compare(const OracleResult& o, const env::StepOutcome& out) {
  std::ostringstream why;
  if (o.collisions != out.grants.collisions) {
    why << "collisions " << o.collisions << " vs " << out.grants.collisions;
    return why.str();
  }
  for (std::size_t i = 0; i < o.vues.size(); ++i) {
    const OracleVue& v = o.vues[i];
    const env::Grant& g = out.grants.rows[i];
    if (v.slot != g.selected_slot) why << "vue " << i << " slot";
    else if (v.station != g.station) why << "vue " << i << " station";
    else if (v.channels != g.channels) why << "vue " << i << " channels";
    else if (v.association_failed != g.association_failed) why << "vue " << i << " association flag";
    else if (v.spectrum_failed != g.spectrum_failed) why << "vue " << i << " spectrum flag";
    else if (v.throughput_mbps != out.throughputs_mbps[i])
      why << "vue " << i << " throughput " << v.throughput_mbps << " vs " << out.throughputs_mbps[i];
    else if (v.power_cost != out.power_costs[i]) why << "vue " << i << " cost";
    else if (v.reward != out.rewards[i])
      why << "vue " << i << " reward " << v.reward << " vs " << out.rewards[i];
    else if (v.qos != out.observations.bits[i].qos) why << "vue " << i << " qos bit";
    if (!why.str().empty()) return why.str();
  }
  return std::nullopt;
}

}  // namespace cara::testkit
