#include <benchmark/benchmark.h>

#include <vector>

#include "cara/nn/adam.hpp"
#include "cara/nn/mlp.hpp"

using namespace cara;

namespace {

// Critic of the desk setup: 4 agents, action length 17.
const std::vector<int> kCritic{76, 64, 32, 1};

void BM_CriticForward(benchmark::State& state) {
  const auto net = nn::MlpNet::init(kCritic, nn::OutputActivation::Identity, 1);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(76, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(net.forward_batch(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CriticForward)->Arg(1)->Arg(64);

void BM_CriticBackward(benchmark::State& state) {
  const auto net = nn::MlpNet::init(kCritic, nn::OutputActivation::Identity, 1);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(76, state.range(0));
  const Eigen::MatrixXd up = Eigen::MatrixXd::Ones(1, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(nn::mlp_backward(net, x, up));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CriticBackward)->Arg(64);

void BM_AdamStep(benchmark::State& state) {
  auto net = nn::MlpNet::init(kCritic, nn::OutputActivation::Identity, 1);
  nn::AdamState opt(net, {1e-6});
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(76, 64);
  const auto g = nn::mlp_backward(net, x, Eigen::MatrixXd::Ones(1, 64));
  for (auto _ : state) nn::adam_step(opt, net, g);
}
BENCHMARK(BM_AdamStep);

}  // namespace
