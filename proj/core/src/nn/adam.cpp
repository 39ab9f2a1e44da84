#include "cara/nn/adam.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cara::nn {

namespace {

std::vector<DenseLayer> zeros_like(const MlpNet& net) {
  std::vector<DenseLayer> out;
  for (const DenseLayer& l : net.layers())
    out.push_back({Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()),
                   Eigen::VectorXd::Zero(l.bias.size())});
  return out;
}

}  // namespace

AdamState::AdamState(const MlpNet& net, AdamConfig cfg)
    : config(cfg), first_moment(zeros_like(net)), second_moment(zeros_like(net)) {}

void adam_step(AdamState& state, MlpNet& net, const GradPack& grads) {
  auto& layers = net.layers();
  if (grads.layers.size() != layers.size() || state.first_moment.size() != layers.size())
    throw std::invalid_argument("adam_step: layer count mismatch");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (grads.layers[l].weight.rows() != layers[l].weight.rows() ||
        grads.layers[l].weight.cols() != layers[l].weight.cols() ||
        grads.layers[l].bias.size() != layers[l].bias.size())
      throw std::invalid_argument("adam_step: gradient shape mismatch at layer " +
                                  std::to_string(l));
    if (!grads.layers[l].weight.allFinite() || !grads.layers[l].bias.allFinite())
      throw std::invalid_argument("adam_step: non-finite gradient at layer " +
                                  std::to_string(l));
  }

  const AdamConfig& c = state.config;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correct1 = 1.0 - std::pow(c.beta1, t);
  const double correct2 = 1.0 - std::pow(c.beta2, t);

  auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
    m = c.beta1 * m + (1.0 - c.beta1) * g;
    v = c.beta2 * v + (1.0 - c.beta2) * g.cwiseProduct(g);
    param.array() -= c.learning_rate * (m.array() / correct1) /
                     ((v.array() / correct2).sqrt() + c.epsilon);
  };
  for (std::size_t l = 0; l < layers.size(); ++l) {
    update(layers[l].weight, state.first_moment[l].weight, state.second_moment[l].weight,
           grads.layers[l].weight);
    update(layers[l].bias, state.first_moment[l].bias, state.second_moment[l].bias,
           grads.layers[l].bias);
  }
}

}  // namespace cara::nn
