#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "cara/baselines/random_policy.hpp"
#include "cara/marl/maddpg.hpp"
#include "cara/marl/training.hpp"
#include "fixtures.hpp"

using namespace cara;
using namespace cara::marl;

namespace {

TrainerConfig small_cfg() {
  TrainerConfig c;
  c.episodes = 3;
  c.steps_per_episode = 12;
  c.minibatch = 8;
  c.buffer_capacity = 40;
  c.hidden = {16, 8};
  c.noise_decay_episodes = 2;
  c.seed = 5;
  return c;
}

env::HetVNetEnv desk_env() {
  return env::HetVNetEnv(env::build_topology(testkit::desk_topology_config(), 2));
}

// Goes non-finite (or throws) at a chosen global step.
class FaultyLearner : public Learner {
 public:
  FaultyLearner(std::size_t agents, int len, int bad_step, bool throw_instead)
      : inner_(agents, len, 1), bad_step_(bad_step), throw_(throw_instead) {}
  std::string_view algorithm() const override { return "faulty"; }
  env::JointAction act(const env::JointObservation& obs, double noise) override {
    auto a = inner_.act(obs, noise);
    if (throw_ && step_ == bad_step_) a[0][0] = std::numeric_limits<double>::quiet_NaN();
    return a;
  }
  void observe(const env::JointObservation&, const env::JointAction&,
               const env::StepOutcome&) override {
    ++step_;
  }
  void end_episode() override {}
  void save(const std::filesystem::path&) const override {}
  void load(const std::filesystem::path&) override {}
  bool finite() const override { return throw_ || step_ <= bad_step_; }

 private:
  baselines::RandomLearner inner_;
  int step_ = 0;
  int bad_step_;
  bool throw_;
};

}  // namespace

TEST(Training, NoiseScheduleDecaysLinearlyThenFlat) {
  TrainerConfig c;
  c.noise_decay_episodes = 400;
  EXPECT_DOUBLE_EQ(c.noise_scale(0), 0.9);
  EXPECT_DOUBLE_EQ(c.noise_scale(200), 0.475);
  EXPECT_DOUBLE_EQ(c.noise_scale(400), 0.05);
  EXPECT_DOUBLE_EQ(c.noise_scale(499), 0.05);
  for (int e = 1; e < 400; ++e) EXPECT_LT(c.noise_scale(e), c.noise_scale(e - 1));
}

TEST(Training, DefaultsFollowReferenceHyperparameters) {
  const TrainerConfig c;
  EXPECT_EQ(c.episodes, 500);
  EXPECT_EQ(c.steps_per_episode, 100);
  EXPECT_EQ(c.minibatch, 64);
  EXPECT_EQ(c.gamma, 0.95);
  EXPECT_EQ(c.learning_rate, 0.05);
  EXPECT_EQ(c.buffer_capacity, 1000u);
  EXPECT_EQ(c.noise_initial, 0.9);
  EXPECT_EQ(c.tau, 0.01);
  EXPECT_EQ(c.hidden, (std::vector<int>{64, 32}));
}

TEST(Training, ValidateRejectsBadValues) {
  TrainerConfig c;
  c.gamma = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = TrainerConfig{};
  c.minibatch = 2000;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = TrainerConfig{};
  c.tau = 1.1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = TrainerConfig{};
  c.episodes = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Training, WarmupGateStillEmitsMetrics) {
  TrainerConfig c = small_cfg();
  c.episodes = 1;
  c.steps_per_episode = 1;
  auto env = desk_env();
  MaddpgLearner learner(4, 17, c);
  const auto series = run_training(env, learner, c);
  ASSERT_EQ(series.size(), 1u);
  EXPECT_EQ(learner.updates(), 0u);
  EXPECT_EQ(series[0].episode, 0);
  EXPECT_TRUE(std::isfinite(series[0].total_reward));
}

TEST(Training, MetricsAggregateRewardsAndThroughput) {
  TrainerConfig c = small_cfg();
  auto env = desk_env();
  baselines::RandomLearner learner(4, 17, 3);
  const auto series = run_training(env, learner, c);
  ASSERT_EQ(series.size(), 3u);

  // replay the same rollout by hand
  auto env2 = desk_env();
  baselines::RandomLearner again(4, 17, 3);
  for (int e = 0; e < 3; ++e) {
    auto obs = env2.reset(episode_seed(c.seed, e));
    double r = 0, tp = 0;
    int fails = 0, coll = 0;
    for (int t = 0; t < c.steps_per_episode; ++t) {
      const auto a = again.act(obs, c.noise_scale(e));
      const auto out = env2.step(a);
      for (std::size_t i = 0; i < 4; ++i) {
        r += out.rewards[i];
        tp += out.throughputs_mbps[i];
        fails += out.grants.rows[i].association_failed;
      }
      coll += out.grants.collisions;
      obs = out.observations;
    }
    EXPECT_EQ(series[static_cast<std::size_t>(e)].total_reward, r);
    EXPECT_EQ(series[static_cast<std::size_t>(e)].mean_throughput_mbps, tp / (4.0 * c.steps_per_episode));
    EXPECT_EQ(series[static_cast<std::size_t>(e)].association_failures, fails);
    EXPECT_EQ(series[static_cast<std::size_t>(e)].collisions, coll);
    EXPECT_GE(series[static_cast<std::size_t>(e)].wall_seconds, 0.0);
  }
}

TEST(Training, FullLoopIsDeterministic) {
  auto run = [] {
    TrainerConfig c = small_cfg();
    auto env = desk_env();
    MaddpgLearner learner(4, 17, c);
    auto s = run_training(env, learner, c);
    for (auto& m : s) m.wall_seconds = 0;
    return std::make_pair(s, nn::flatten_parameters(learner.agents()[3].critic));
  };
  const auto a = run(), b = run();
  ASSERT_EQ(a.first.size(), b.first.size());
  for (std::size_t i = 0; i < a.first.size(); ++i) {
    EXPECT_EQ(a.first[i].total_reward, b.first[i].total_reward);
    EXPECT_EQ(a.first[i].mean_throughput_mbps, b.first[i].mean_throughput_mbps);
  }
  EXPECT_EQ(a.second, b.second);
}

TEST(Training, FirstEpisodeHookSkipsEarlierEpisodes) {
  TrainerConfig c = small_cfg();
  auto env = desk_env();
  baselines::RandomLearner learner(4, 17, 3);
  TrainingHooks hooks;
  hooks.first_episode = 2;
  int calls = 0;
  hooks.on_episode = [&](const EpisodeMetrics& m) {
    EXPECT_EQ(m.episode, 2);
    ++calls;
  };
  EXPECT_EQ(run_training(env, learner, c, hooks).size(), 1u);
  EXPECT_EQ(calls, 1);
}

TEST(Training, NonFiniteNetworkAbortsWithLocation) {
  TrainerConfig c = small_cfg();
  auto env = desk_env();
  FaultyLearner learner(4, 17, 15, false);
  try {
    run_training(env, learner, c);
    FAIL() << "expected abort";
  } catch (const TrainingAborted& e) {
    EXPECT_EQ(e.episode(), 1);
    EXPECT_EQ(e.step(), 3);
  }
}

TEST(Training, LearnerErrorsBecomeAborts) {
  TrainerConfig c = small_cfg();
  auto env = desk_env();
  FaultyLearner learner(4, 17, 5, true);
  try {
    run_training(env, learner, c);
    FAIL() << "expected abort";
  } catch (const TrainingAborted& e) {
    EXPECT_EQ(e.episode(), 0);
    EXPECT_EQ(e.step(), 5);
    EXPECT_NE(std::string(e.what()).find("episode 0"), std::string::npos);
  }
}
