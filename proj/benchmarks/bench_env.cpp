#include <benchmark/benchmark.h>

#include "cara/common/rng.hpp"
#include "cara/env/hetvnet_env.hpp"
#include "cara/env/topology.hpp"

using namespace cara;

namespace {

env::TopologyConfig sized(int scale) {
  env::TopologyConfig c;
  if (scale == 0) {
    c.micro_count = 2;
    c.pico_count = 4;
    c.vue_count = 4;
    c.radio.shared_channels = 6;
    c.radio.mmwave_channels = 3;
    c.deployment_radius_m = 500;
  }
  return c;
}

// arg 0: desk layout, arg 1: full-size defaults
void BM_EnvStep(benchmark::State& state) {
  env::HetVNetEnv e(env::build_topology(sized(static_cast<int>(state.range(0))), 1));
  e.reset(1);
  Rng rng(2);
  env::JointAction a(e.agent_count(), env::Action(e.action_length()));
  for (auto& v : a)
    for (double& x : v) x = rng.uniform(-1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(e.step(a));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(e.agent_count()));
}
BENCHMARK(BM_EnvStep)->Arg(0)->Arg(1);

}  // namespace
