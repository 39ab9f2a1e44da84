#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace cara::nn {

enum class OutputActivation : std::uint8_t { Identity, Tanh };

std::string_view to_string(OutputActivation act);
OutputActivation parse_output_activation(std::string_view text);

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
};

/// Fully connected network: ReLU on every hidden layer, selectable head.
///
/// Batched calls take one sample per column.
class MlpNet {
 public:
  MlpNet() = default;
  MlpNet(std::vector<DenseLayer> layers, OutputActivation output);

  /// Glorot-uniform weights, zero biases. Throws std::invalid_argument when
  /// fewer than two dims are given or any dim is non-positive.
  static MlpNet init(std::span<const int> dims, OutputActivation output,
                     std::uint64_t seed);

  Eigen::VectorXd forward(const Eigen::VectorXd& input) const;
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& inputs) const;

  int input_width() const;
  int output_width() const;
  std::vector<int> dims() const;
  std::size_t parameter_count() const;

  OutputActivation output_activation() const { return output_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& layers() { return layers_; }

  bool all_finite() const;

 private:
  std::vector<DenseLayer> layers_;
  OutputActivation output_ = OutputActivation::Identity;
};

/// Gradients shaped like an MlpNet plus the input gradient.
struct GradPack {
  std::vector<DenseLayer> layers;
  Eigen::MatrixXd input;  // in x batch

  double squared_norm() const;  // over parameter gradients only
  void scale(double factor);
  bool all_finite() const;
};

/// Post-activation values of every layer, kept for the backward pass.
struct ForwardTape {
  std::vector<Eigen::MatrixXd> activations;  // [0] = inputs, back() = outputs

  const Eigen::MatrixXd& output() const { return activations.back(); }
};

ForwardTape forward_tape(const MlpNet& net, const Eigen::MatrixXd& inputs);

/// Reverse-mode gradients of sum_{b} <upstream[:, b], net(inputs[:, b])>.
GradPack backward(const MlpNet& net, const ForwardTape& tape,
                  const Eigen::MatrixXd& upstream);

// Convenience: forward pass then backward.
GradPack mlp_backward(const MlpNet& net, const Eigen::MatrixXd& inputs,
                      const Eigen::MatrixXd& upstream);

// Rescales parameter gradients so their global L2 norm is at most max_norm.
// Returns the norm before clipping.
double clip_global_norm(GradPack& grads, double max_norm);

/// target <- tau * behavior + (1 - tau) * target, elementwise.
void soft_update(MlpNet& target, const MlpNet& behavior, double tau);

bool same_shape(const MlpNet& a, const MlpNet& b);

// FNV-1a over the raw parameter bytes.
std::uint64_t parameter_hash(const MlpNet& net);

// Flat views in layer order (weight column-major, then bias).
std::vector<double> flatten_parameters(const MlpNet& net);
void assign_parameters(MlpNet& net, std::span<const double> values);
std::vector<double> flatten_gradients(const GradPack& grads);

}  // namespace cara::nn
