#pragma once

#include <cstdint>
#include <vector>

#include "cara/nn/mlp.hpp"

namespace cara::nn {

struct AdamConfig {
  double learning_rate = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First/second moment accumulators shaped like one network.
struct AdamState {
  AdamState() = default;
  AdamState(const MlpNet& net, AdamConfig config);

  AdamConfig config;
  std::int64_t step = 0;
  std::vector<DenseLayer> first_moment;
  std::vector<DenseLayer> second_moment;
};

// Bias-corrected Adam descent step on `net`. Throws std::invalid_argument on
// shape mismatch or a non-finite gradient.
void adam_step(AdamState& state, MlpNet& net, const GradPack& grads);

}  // namespace cara::nn
