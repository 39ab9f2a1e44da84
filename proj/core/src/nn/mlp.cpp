#include "cara/nn/mlp.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

#include "cara/common/rng.hpp"

namespace cara::nn {

std::string_view to_string(OutputActivation act) {
  return act == OutputActivation::Tanh ? "tanh" : "identity";
}

OutputActivation parse_output_activation(std::string_view text) {
  if (text == "tanh") return OutputActivation::Tanh;
  if (text == "identity") return OutputActivation::Identity;
  throw std::invalid_argument("unknown output activation '" + std::string(text) + "'");
}

MlpNet::MlpNet(std::vector<DenseLayer> layers, OutputActivation output)
    : layers_(std::move(layers)), output_(output) {
  if (layers_.empty()) throw std::invalid_argument("MlpNet needs at least one layer");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const DenseLayer& layer = layers_[l];
    if (layer.weight.rows() != layer.bias.size())
      throw std::invalid_argument("layer " + std::to_string(l) + ": bias/weight mismatch");
    if (l > 0 && layer.weight.cols() != layers_[l - 1].weight.rows())
      throw std::invalid_argument("layer " + std::to_string(l) + ": input width " +
                                  std::to_string(layer.weight.cols()) + " does not chain to " +
                                  std::to_string(layers_[l - 1].weight.rows()));
  }
}

MlpNet MlpNet::init(std::span<const int> dims, OutputActivation output, std::uint64_t seed) {
  if (dims.size() < 2) throw std::invalid_argument("MlpNet::init needs at least two dims");
  for (int d : dims)
    if (d <= 0) throw std::invalid_argument("MlpNet::init: non-positive dimension");

  Rng rng(seed);
  std::vector<DenseLayer> layers;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const int in = dims[l];
    const int out = dims[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    DenseLayer layer{Eigen::MatrixXd(out, in), Eigen::VectorXd::Zero(out)};
    for (Eigen::Index c = 0; c < in; ++c)
      for (Eigen::Index r = 0; r < out; ++r) layer.weight(r, c) = rng.uniform(-limit, limit);
    layers.push_back(std::move(layer));
  }
  return MlpNet(std::move(layers), output);
}

namespace {

void check_input_rows(const MlpNet& net, Eigen::Index rows) {
  if (rows != net.input_width())
    throw std::invalid_argument("MlpNet input width " + std::to_string(rows) + ", expected " +
                                std::to_string(net.input_width()));
}

void apply_head(Eigen::MatrixXd& z, OutputActivation act) {
  if (act == OutputActivation::Tanh) z = z.array().tanh().matrix();
}

}  // namespace

Eigen::VectorXd MlpNet::forward(const Eigen::VectorXd& input) const {
  return forward_batch(input);
}

Eigen::MatrixXd MlpNet::forward_batch(const Eigen::MatrixXd& inputs) const {
  check_input_rows(*this, inputs.rows());
  Eigen::MatrixXd a = inputs;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::MatrixXd z = layers_[l].weight * a;
    z.colwise() += layers_[l].bias;
    if (l + 1 < layers_.size()) {
      a = z.cwiseMax(0.0);
    } else {
      apply_head(z, output_);
      a = std::move(z);
    }
  }
  return a;
}

int MlpNet::input_width() const {
  return layers_.empty() ? 0 : static_cast<int>(layers_.front().weight.cols());
}

int MlpNet::output_width() const {
  return layers_.empty() ? 0 : static_cast<int>(layers_.back().weight.rows());
}

std::vector<int> MlpNet::dims() const {
  std::vector<int> d;
  if (layers_.empty()) return d;
  d.push_back(input_width());
  for (const DenseLayer& l : layers_) d.push_back(static_cast<int>(l.weight.rows()));
  return d;
}

std::size_t MlpNet::parameter_count() const {
  std::size_t n = 0;
  for (const DenseLayer& l : layers_) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

bool MlpNet::all_finite() const {
  for (const DenseLayer& l : layers_)
    if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
  return true;
}

double GradPack::squared_norm() const {
  double s = 0.0;
  for (const DenseLayer& l : layers) s += l.weight.squaredNorm() + l.bias.squaredNorm();
  return s;
}

void GradPack::scale(double factor) {
  for (DenseLayer& l : layers) {
    l.weight *= factor;
    l.bias *= factor;
  }
  input *= factor;
}

bool GradPack::all_finite() const {
  for (const DenseLayer& l : layers)
    if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
  return input.allFinite();
}

ForwardTape forward_tape(const MlpNet& net, const Eigen::MatrixXd& inputs) {
  check_input_rows(net, inputs.rows());
  const auto& layers = net.layers();
  ForwardTape tape;
  tape.activations.reserve(layers.size() + 1);
  tape.activations.push_back(inputs);
  for (std::size_t l = 0; l < layers.size(); ++l) {
    Eigen::MatrixXd z = layers[l].weight * tape.activations.back();
    z.colwise() += layers[l].bias;
    if (l + 1 < layers.size()) {
      tape.activations.push_back(z.cwiseMax(0.0));
    } else {
      apply_head(z, net.output_activation());
      tape.activations.push_back(std::move(z));
    }
  }
  return tape;
}

GradPack backward(const MlpNet& net, const ForwardTape& tape, const Eigen::MatrixXd& upstream) {
  const auto& layers = net.layers();
  const Eigen::MatrixXd& out = tape.output();
  if (upstream.rows() != out.rows() || upstream.cols() != out.cols())
    throw std::invalid_argument("upstream gradient shape " + std::to_string(upstream.rows()) +
                                "x" + std::to_string(upstream.cols()) +
                                " does not match network output " + std::to_string(out.rows()) +
                                "x" + std::to_string(out.cols()));

  GradPack g;
  g.layers.resize(layers.size());

  // delta holds dL/dz for the current layer.
  Eigen::MatrixXd delta = upstream;
  if (net.output_activation() == OutputActivation::Tanh)
    delta.array() *= 1.0 - out.array().square();

  for (std::size_t l = layers.size(); l-- > 0;) {
    const Eigen::MatrixXd& a_in = tape.activations[l];
    g.layers[l].weight.noalias() = delta * a_in.transpose();
    g.layers[l].bias = delta.rowwise().sum();
    Eigen::MatrixXd prev = layers[l].weight.transpose() * delta;
    if (l > 0) {
      prev = (a_in.array() > 0.0).select(prev, 0.0);
      delta = std::move(prev);
    } else {
      g.input = std::move(prev);
    }
  }
  return g;
}

GradPack mlp_backward(const MlpNet& net, const Eigen::MatrixXd& inputs,
                      const Eigen::MatrixXd& upstream) {
  return backward(net, forward_tape(net, inputs), upstream);
}

double clip_global_norm(GradPack& grads, double max_norm) {
  const double norm = std::sqrt(grads.squared_norm());
  if (max_norm > 0.0 && norm > max_norm) {
    const double f = max_norm / norm;
    for (DenseLayer& l : grads.layers) {
      l.weight *= f;
      l.bias *= f;
    }
  }
  return norm;
}

bool same_shape(const MlpNet& a, const MlpNet& b) {
  return a.dims() == b.dims() && a.output_activation() == b.output_activation();
}

void soft_update(MlpNet& target, const MlpNet& behavior, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0))
    throw std::invalid_argument("soft_update: tau must lie in [0, 1], got " + std::to_string(tau));
  if (!same_shape(target, behavior))
    throw std::invalid_argument("soft_update: network shapes differ");
  if (tau == 0.0) return;
  if (tau == 1.0) {
    target = behavior;
    return;
  }
  auto& t = target.layers();
  const auto& b = behavior.layers();
  for (std::size_t l = 0; l < t.size(); ++l) {
    t[l].weight = tau * b[l].weight + (1.0 - tau) * t[l].weight;
    t[l].bias = tau * b[l].bias + (1.0 - tau) * t[l].bias;
  }
}

std::uint64_t parameter_hash(const MlpNet& net) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const double* data, Eigen::Index n) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < static_cast<std::size_t>(n) * sizeof(double); ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const DenseLayer& l : net.layers()) {
    mix(l.weight.data(), l.weight.size());
    mix(l.bias.data(), l.bias.size());
  }
  return h;
}

std::vector<double> flatten_parameters(const MlpNet& net) {
  std::vector<double> out;
  out.reserve(net.parameter_count());
  for (const DenseLayer& l : net.layers()) {
    out.insert(out.end(), l.weight.data(), l.weight.data() + l.weight.size());
    out.insert(out.end(), l.bias.data(), l.bias.data() + l.bias.size());
  }
  return out;
}

void assign_parameters(MlpNet& net, std::span<const double> values) {
  if (values.size() != net.parameter_count())
    throw std::invalid_argument("assign_parameters: expected " +
                                std::to_string(net.parameter_count()) + " values, got " +
                                std::to_string(values.size()));
  std::size_t pos = 0;
  for (DenseLayer& l : net.layers()) {
    std::memcpy(l.weight.data(), values.data() + pos, sizeof(double) * l.weight.size());
    pos += static_cast<std::size_t>(l.weight.size());
    std::memcpy(l.bias.data(), values.data() + pos, sizeof(double) * l.bias.size());
    pos += static_cast<std::size_t>(l.bias.size());
  }
}

std::vector<double> flatten_gradients(const GradPack& grads) {
  std::vector<double> out;
  for (const DenseLayer& l : grads.layers) {
    out.insert(out.end(), l.weight.data(), l.weight.data() + l.weight.size());
    out.insert(out.end(), l.bias.data(), l.bias.data() + l.bias.size());
  }
  return out;
}

}  // namespace cara::nn
