#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "cara/common/rng.hpp"

namespace cara::marl {

/// One joint experience (x, a, r, x'). Actions are agent-major: agent k owns
/// entries [k * L, (k + 1) * L).
struct Transition {
  std::vector<double> x;
  std::vector<double> actions;
  std::vector<double> rewards;
  std::vector<double> x_next;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Column-per-sample view of a sampled batch.
struct Minibatch {
  Eigen::MatrixXd x;        // 2N x V
  Eigen::MatrixXd actions;  // N*L x V
  Eigen::MatrixXd rewards;  // N x V
  Eigen::MatrixXd x_next;   // 2N x V

  Eigen::Index size() const { return x.cols(); }
};

/// Fixed-capacity FIFO ring of transitions.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::size_t agents, std::size_t action_length,
               std::size_t obs_per_agent = 2);

  // Throws std::invalid_argument on shape mismatch or non-finite entries.
  void push(Transition t);

  std::size_t size() const { return items_.size() < capacity_ ? items_.size() : capacity_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t total_pushed() const { return pushed_; }
  bool empty() const { return pushed_ == 0; }

  // i = 0 is the oldest retained transition.
  const Transition& at(std::size_t i) const;
  const Transition& latest() const { return at(size() - 1); }

  // V distinct indices drawn uniformly; throws std::length_error when the
  // buffer holds fewer than V transitions.
  std::vector<std::size_t> sample_indices(std::size_t v, Rng& rng) const;
  Minibatch gather(std::span<const std::size_t> indices) const;
  Minibatch sample(std::size_t v, Rng& rng) const;

  void write(std::ostream& os) const;
  void read(std::istream& is);

  std::size_t agents() const { return agents_; }
  std::size_t action_length() const { return action_length_; }

 private:
  std::size_t capacity_;
  std::size_t agents_;
  std::size_t action_length_;
  std::size_t obs_width_;
  std::vector<Transition> items_;
  std::size_t head_ = 0;  // next slot to overwrite once full
  std::size_t pushed_ = 0;
};

}  // namespace cara::marl
