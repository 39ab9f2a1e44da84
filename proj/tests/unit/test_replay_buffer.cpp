#include <gtest/gtest.h>

#include <limits>
#include <set>
#include <sstream>

#include "cara/marl/replay_buffer.hpp"

using namespace cara;
using namespace cara::marl;

namespace {

// Sentinel tuple: every field encodes the insertion number.
Transition sentinel(int k, std::size_t agents = 2, std::size_t len = 3) {
  const double v = static_cast<double>(k);
  return {std::vector<double>(2 * agents, v), std::vector<double>(agents * len, v),
          std::vector<double>(agents, v), std::vector<double>(2 * agents, v + 0.5)};
}

}  // namespace

TEST(ReplayBuffer, StartsEmpty) {
  ReplayBuffer b(1000, 2, 3);
  EXPECT_EQ(b.size(), 0u);
  EXPECT_TRUE(b.empty());
  EXPECT_EQ(b.capacity(), 1000u);
}

TEST(ReplayBuffer, EvictsOldestAtCapacity) {
  ReplayBuffer b(1000, 2, 3);
  for (int k = 1; k <= 1001; ++k) b.push(sentinel(k));
  EXPECT_EQ(b.size(), 1000u);
  EXPECT_EQ(b.total_pushed(), 1001u);
  EXPECT_EQ(b.at(0), sentinel(2));
  EXPECT_EQ(b.latest(), sentinel(1001));
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NE(b.at(i), sentinel(1));
}

TEST(ReplayBuffer, FifoOrderUnderLongStreams) {
  ReplayBuffer b(7, 2, 3);
  for (int k = 0; k < 100; ++k) {
    b.push(sentinel(k));
    ASSERT_LE(b.size(), 7u);
    const int oldest = std::max(0, k - 6);
    for (std::size_t i = 0; i < b.size(); ++i)
      ASSERT_EQ(b.at(i), sentinel(oldest + static_cast<int>(i)));
  }
}

TEST(ReplayBuffer, PushThenReadBackLatest) {
  ReplayBuffer b(10, 2, 3);
  Transition t{{1, 0, 0, 1}, {0.1, -0.2, 0.3, 0.4, 0.5, -0.6}, {-0.01, 1.5}, {0, 0, 1, 1}};
  b.push(t);
  EXPECT_EQ(b.latest(), t);
}

TEST(ReplayBuffer, RejectsBadShapesAndNonFinite) {
  ReplayBuffer b(10, 2, 3);
  Transition t = sentinel(1);
  t.actions.pop_back();
  EXPECT_THROW(b.push(t), std::invalid_argument);
  t = sentinel(1);
  t.rewards.push_back(0);
  EXPECT_THROW(b.push(t), std::invalid_argument);
  t = sentinel(1);
  t.x_next[0] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(b.push(t), std::invalid_argument);
  EXPECT_EQ(b.size(), 0u);
}

TEST(ReplayBuffer, SampleDistinctAndDeterministic) {
  ReplayBuffer b(1000, 2, 3);
  for (int k = 0; k < 1000; ++k) b.push(sentinel(k));
  Rng r1(3), r2(3);
  const auto a = b.sample_indices(64, r1);
  const auto c = b.sample_indices(64, r2);
  EXPECT_EQ(a, c);
  EXPECT_EQ(std::set<std::size_t>(a.begin(), a.end()).size(), 64u);
  for (auto i : a) EXPECT_LT(i, 1000u);
}

TEST(ReplayBuffer, FullSampleIsPermutation) {
  ReplayBuffer b(50, 2, 3);
  for (int k = 0; k < 50; ++k) b.push(sentinel(k));
  Rng r(1);
  auto idx = b.sample_indices(50, r);
  std::sort(idx.begin(), idx.end());
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(idx[i], i);
}

TEST(ReplayBuffer, UndersizedSampleThrows) {
  ReplayBuffer b(100, 2, 3);
  for (int k = 0; k < 10; ++k) b.push(sentinel(k));
  Rng r(1);
  EXPECT_THROW(b.sample_indices(11, r), std::length_error);
}

TEST(ReplayBuffer, SamplingIsRoughlyUniform) {
  ReplayBuffer b(20, 1, 1);
  for (int k = 0; k < 20; ++k) b.push(sentinel(k, 1, 1));
  Rng r(5);
  std::vector<int> hits(20, 0);
  for (int i = 0; i < 20000; ++i)
    for (auto j : b.sample_indices(5, r)) ++hits[j];
  for (int h : hits) EXPECT_NEAR(h, 5000, 300);
}

TEST(ReplayBuffer, GatherLaysOutColumns) {
  ReplayBuffer b(10, 2, 3);
  for (int k = 0; k < 5; ++k) b.push(sentinel(k));
  const std::vector<std::size_t> idx{4, 1};
  const Minibatch m = b.gather(idx);
  EXPECT_EQ(m.size(), 2);
  EXPECT_EQ(m.x.rows(), 4);
  EXPECT_EQ(m.actions.rows(), 6);
  EXPECT_EQ(m.rewards.rows(), 2);
  EXPECT_EQ(m.x(0, 0), 4.0);
  EXPECT_EQ(m.actions(5, 1), 1.0);
  EXPECT_EQ(m.x_next(3, 1), 1.5);
}

TEST(ReplayBuffer, SerializationRoundTripPreservesOrder) {
  ReplayBuffer b(5, 2, 3);
  for (int k = 0; k < 8; ++k) b.push(sentinel(k));
  std::stringstream ss;
  b.write(ss);
  ReplayBuffer c(5, 2, 3);
  c.read(ss);
  ASSERT_EQ(c.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(c.at(i), b.at(i));
  b.push(sentinel(8));
  c.push(sentinel(8));
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(c.at(i), b.at(i));
  Rng r1(2), r2(2);
  EXPECT_EQ(b.sample_indices(3, r1), c.sample_indices(3, r2));
}
