#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <set>

#include "brute_force.hpp"
#include "cara/env/hetvnet_env.hpp"
#include "fixtures.hpp"

using namespace cara;
using namespace cara::env;
using testkit::macro_at;
using testkit::micro_at;
using testkit::pico_at;

namespace {

Action zeros(const Topology& t) { return Action(t.action_length(), -0.5); }

}  // namespace

TEST(Decode, OptOutSlotMeansAssociationFailure) {
  const Topology t = testkit::make_topology({macro_at(0, 0)}, {{10, 0}}, testkit::radio(1, 1, 1));
  Action a = zeros(t);
  a[1] = 0.9;  // "none"
  a[t.shared_block_offset()] = 0.8;
  const GrantTable g = decode_and_resolve(t, {a});
  EXPECT_EQ(g.rows[0].selected_slot, 1u);
  EXPECT_FALSE(g.rows[0].station.has_value());
  EXPECT_TRUE(g.rows[0].association_failed);
  EXPECT_TRUE(g.rows[0].channels.empty());
}

TEST(Decode, OutOfCoverageStationIsAssociationFailure) {
  const Topology t = testkit::make_topology({macro_at(0, 0), pico_at(0, 0)}, {{150, 0}},
                                            testkit::radio(1, 1, 1));
  Action a = zeros(t);
  a[1] = 1.0;
  a[t.mmwave_block_offset()] = 0.7;
  const GrantTable g = decode_and_resolve(t, {a});
  EXPECT_EQ(g.rows[0].selected_slot, 1u);
  EXPECT_TRUE(g.rows[0].association_failed);
  EXPECT_FALSE(g.rows[0].spectrum_failed);
  EXPECT_TRUE(g.rows[0].channels.empty());
}

TEST(Decode, SharedContestedChannelGoesToNobody) {
  const Topology t = testkit::make_topology({macro_at(0, 0)}, {{10, 0}, {-10, 0}},
                                            testkit::radio(2, 1, 2));
  Action a = zeros(t);
  a[0] = 1.0;
  a[t.shared_block_offset()] = 0.6;  // only channel 0 positive
  const GrantTable g = decode_and_resolve(t, {a, a});
  for (const Grant& row : g.rows) {
    EXPECT_EQ(row.station, std::optional<std::size_t>(0));
    EXPECT_TRUE(row.channels.empty());
    EXPECT_TRUE(row.spectrum_failed);
    EXPECT_FALSE(row.association_failed);
  }
  EXPECT_EQ(g.collisions, 1);
}

TEST(Decode, SameChannelOnDifferentStationsIsNotACollision) {
  const Topology t = testkit::make_topology({macro_at(0, 0), micro_at(10, 0)}, {{10, 0}, {-10, 0}},
                                            testkit::radio(1, 1, 1));
  Action a = zeros(t);
  a[0] = 1.0;
  a[t.shared_block_offset()] = 0.6;
  Action b = a;
  b[0] = -1.0;
  b[1] = 1.0;
  const GrantTable g = decode_and_resolve(t, {a, b});
  EXPECT_EQ(g.collisions, 0);
  EXPECT_EQ(g.rows[0].channels, std::vector<int>{0});
  EXPECT_EQ(g.rows[1].channels, std::vector<int>{0});
}

TEST(Decode, TopPositiveChannelsCappedAtCBar) {
  const Topology t = testkit::make_topology({macro_at(0, 0)}, {{10, 0}}, testkit::radio(2, 1, 1));
  auto r = testkit::radio(4, 1, 2);
  const Topology wide = testkit::make_topology({macro_at(0, 0)}, {{10, 0}}, r);
  Action a = zeros(wide);
  a[0] = 1.0;
  const std::size_t off = wide.shared_block_offset();
  a[off + 0] = 0.1;
  a[off + 1] = 0.9;
  a[off + 2] = -0.3;
  a[off + 3] = 0.5;
  EXPECT_EQ(decode_and_resolve(wide, {a}).rows[0].channels, (std::vector<int>{1, 3}));
  // nothing positive: associated but spectrum failure
  for (std::size_t c = 0; c < 4; ++c) a[off + c] = -0.2;
  const GrantTable g = decode_and_resolve(wide, {a});
  EXPECT_TRUE(g.rows[0].spectrum_failed);
  EXPECT_TRUE(g.rows[0].channels.empty());
  (void)t;
}

TEST(Decode, TiesBreakTowardsLowerIndex) {
  const Topology t = testkit::make_topology({macro_at(0, 0), micro_at(0, 0)}, {{10, 0}},
                                            testkit::radio(3, 1, 1));
  Action a = zeros(t);
  a[0] = 0.7;
  a[1] = 0.7;
  const std::size_t off = t.shared_block_offset();
  a[off + 1] = 0.4;
  a[off + 2] = 0.4;
  const GrantTable g = decode_and_resolve(t, {a});
  EXPECT_EQ(g.rows[0].selected_slot, 0u);
  EXPECT_EQ(g.rows[0].channels, std::vector<int>{1});
}

TEST(Decode, PicoUsesMmWavePreferencesOnly) {
  const Topology t = testkit::make_topology({macro_at(0, 0), pico_at(0, 0)}, {{10, 0}},
                                            testkit::radio(2, 2, 2));
  Action a = zeros(t);
  a[1] = 1.0;
  a[t.shared_block_offset()] = 0.9;
  a[t.mmwave_block_offset() + 1] = 0.2;
  EXPECT_EQ(decode_and_resolve(t, {a}).rows[0].channels, std::vector<int>{1});
}

TEST(Decode, StationBlockShiftInvariance) {
  const Topology t = build_topology(testkit::desk_topology_config(), 3);
  Rng rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    Action a(t.action_length());
    for (double& v : a) v = rng.uniform(-1, 1);
    Action b = a;
    const double shift = trial == 0 ? 0.3 : rng.uniform(-2, 2);
    for (std::size_t k = 0; k <= t.station_count(); ++k) b[k] += shift;
    EXPECT_EQ(decode_station_slot(t, a), decode_station_slot(t, b));
  }
}

TEST(Decode, RejectsMalformedActions) {
  const Topology t = build_topology(testkit::desk_topology_config(), 3);
  JointAction ok(t.vue_count(), Action(t.action_length(), 0.1));
  EXPECT_NO_THROW(decode_and_resolve(t, ok));
  JointAction short_one = ok;
  short_one[2].pop_back();
  EXPECT_THROW(decode_and_resolve(t, short_one), std::invalid_argument);
  JointAction few = ok;
  few.pop_back();
  EXPECT_THROW(decode_and_resolve(t, few), std::invalid_argument);
  JointAction nan = ok;
  nan[1][3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(decode_and_resolve(t, nan), std::invalid_argument);
  JointAction inf = ok;
  inf[0][0] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(decode_and_resolve(t, inf), std::invalid_argument);
}

TEST(Decode, GrantTableInvariantsUnderFuzzing) {
  auto cfg = testkit::desk_topology_config();
  cfg.deployment_radius_m = 200;
  Rng rng(21);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Topology t = build_topology(cfg, seed);
    for (int trial = 0; trial < 200; ++trial) {
      const GrantTable g = decode_and_resolve(t, testkit::random_actions(rng, t.vue_count(), t.action_length()));
      std::set<std::pair<std::size_t, int>> used;
      for (const Grant& row : g.rows) {
        EXPECT_LE(row.channels.size(), static_cast<std::size_t>(t.params().max_channels));
        if (!row.station) {
          EXPECT_TRUE(row.channels.empty());
          EXPECT_TRUE(row.association_failed);
          continue;
        }
        EXPECT_EQ(row.spectrum_failed, row.channels.empty());
        const int pool = t.pool_size(pool_of(t.station(*row.station).tier));
        for (int c : row.channels) {
          EXPECT_GE(c, 0);
          EXPECT_LT(c, pool);
          EXPECT_TRUE(used.insert({*row.station, c}).second);
        }
      }
    }
  }
}

TEST(Decode, MatchesBruteForceOracleOnSmallSuite) {
  Rng rng(77);
  int checked = 0;
  for (const Topology& t : testkit::oracle_suite()) {
    for (int trial = 0; trial < 300; ++trial) {
      const JointAction a = testkit::random_actions(rng, t.vue_count(), t.action_length());
      if (!testkit::unambiguous(t, a)) continue;
      std::vector<double> prev(t.vue_count(), 0.0);
      const StepOutcome out = evaluate_step(t, a, prev);
      const auto diff = testkit::compare(testkit::brute_force(t, a), out);
      ASSERT_FALSE(diff.has_value()) << *diff;
      ++checked;
    }
  }
  EXPECT_GT(checked, 2000);
}

TEST(Decode, OracleSuiteExercisesCollisionsAndCoverage) {
  Rng rng(78);
  int collisions = 0, out_of_range = 0, granted = 0;
  for (const Topology& t : testkit::oracle_suite())
    for (int trial = 0; trial < 300; ++trial) {
      const auto o = testkit::brute_force(t, testkit::random_actions(rng, t.vue_count(), t.action_length()));
      collisions += o.collisions;
      for (const auto& v : o.vues) {
        out_of_range += v.association_failed && v.slot < t.station_count() ? 1 : 0;
        granted += v.channels.empty() ? 0 : 1;
      }
    }
  EXPECT_GT(collisions, 100);
  EXPECT_GT(out_of_range, 100);
  EXPECT_GT(granted, 1000);
}
