#include <benchmark/benchmark.h>

#include "cara/env/hetvnet_env.hpp"
#include "cara/marl/maddpg.hpp"

using namespace cara;

namespace {

// One full learning step (buffer push, shared minibatch, N critic and actor
// updates) on the desk layout.
void BM_MaddpgObserve(benchmark::State& state) {
  env::TopologyConfig tc;
  tc.micro_count = 2;
  tc.pico_count = 4;
  tc.vue_count = 4;
  tc.radio.shared_channels = 6;
  tc.radio.mmwave_channels = 3;
  tc.deployment_radius_m = 500;
  env::HetVNetEnv e(env::build_topology(tc, 1));
  marl::TrainerConfig cfg;
  marl::MaddpgLearner learner(e.agent_count(), static_cast<int>(e.action_length()), cfg);
  auto obs = e.reset(1);
  for (int t = 0; t < cfg.minibatch; ++t) {
    const auto a = learner.act(obs, 0.5);
    const auto out = e.step(a);
    learner.observe(obs, a, out);
    obs = out.observations;
  }
  for (auto _ : state) {
    const auto a = learner.act(obs, 0.5);
    const auto out = e.step(a);
    learner.observe(obs, a, out);
    obs = out.observations;
  }
}
BENCHMARK(BM_MaddpgObserve)->Unit(benchmark::kMicrosecond);

}  // namespace
