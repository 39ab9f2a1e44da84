#include "cara/marl/replay_buffer.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cara/nn/serialize.hpp"

namespace cara::marl {

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t agents, std::size_t action_length,
                           std::size_t obs_per_agent)
    : capacity_(capacity),
      agents_(agents),
      action_length_(action_length),
      obs_width_(obs_per_agent * agents) {
  if (capacity_ == 0) throw std::invalid_argument("replay buffer capacity must be positive");
  items_.reserve(capacity_);
}

void ReplayBuffer::push(Transition t) {
  auto check = [](const std::vector<double>& v, std::size_t expect, const char* what) {
    if (v.size() != expect)
      throw std::invalid_argument(std::string("transition ") + what + " has " +
                                  std::to_string(v.size()) + " entries, expected " +
                                  std::to_string(expect));
    for (double e : v)
      if (!std::isfinite(e))
        throw std::invalid_argument(std::string("transition ") + what + " is not finite");
  };
  check(t.x, obs_width_, "x");
  check(t.actions, agents_ * action_length_, "actions");
  check(t.rewards, agents_, "rewards");
  check(t.x_next, obs_width_, "x_next");

  if (items_.size() < capacity_) {
    items_.push_back(std::move(t));
  } else {
    items_[head_] = std::move(t);
    head_ = (head_ + 1) % capacity_;
  }
  ++pushed_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("replay buffer index out of range");
  return items_[(head_ + i) % items_.size()];
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t v, Rng& rng) const {
  if (v > size())
    throw std::length_error("replay buffer holds " + std::to_string(size()) +
                            " transitions, minibatch needs " + std::to_string(v));
  std::vector<std::size_t> idx(size());
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t k = 0; k < v; ++k) {
    const std::size_t j = k + static_cast<std::size_t>(rng.below(idx.size() - k));
    std::swap(idx[k], idx[j]);
  }
  idx.resize(v);
  return idx;
}

Minibatch ReplayBuffer::gather(std::span<const std::size_t> indices) const {
  const auto v = static_cast<Eigen::Index>(indices.size());
  Minibatch mb{Eigen::MatrixXd(obs_width_, v), Eigen::MatrixXd(agents_ * action_length_, v),
               Eigen::MatrixXd(agents_, v), Eigen::MatrixXd(obs_width_, v)};
  for (Eigen::Index c = 0; c < v; ++c) {
    const Transition& t = at(indices[static_cast<std::size_t>(c)]);
    mb.x.col(c) = Eigen::Map<const Eigen::VectorXd>(t.x.data(), mb.x.rows());
    mb.actions.col(c) = Eigen::Map<const Eigen::VectorXd>(t.actions.data(), mb.actions.rows());
    mb.rewards.col(c) = Eigen::Map<const Eigen::VectorXd>(t.rewards.data(), mb.rewards.rows());
    mb.x_next.col(c) = Eigen::Map<const Eigen::VectorXd>(t.x_next.data(), mb.x_next.rows());
  }
  return mb;
}

Minibatch ReplayBuffer::sample(std::size_t v, Rng& rng) const {
  const auto idx = sample_indices(v, rng);
  return gather(idx);
}

void ReplayBuffer::write(std::ostream& os) const {
  nn::FileHeader h{"CARAREPLAY 1",
                   {{"capacity", std::to_string(capacity_)},
                    {"agents", std::to_string(agents_)},
                    {"action_length", std::to_string(action_length_)},
                    {"obs_width", std::to_string(obs_width_)},
                    {"size", std::to_string(size())},
                    {"pushed", std::to_string(pushed_)}}};
  nn::write_header(os, h);
  std::vector<nn::NamedArray> arrays;
  for (std::size_t i = 0; i < size(); ++i) {
    const Transition& t = at(i);
    arrays.push_back({"x", t.x});
    arrays.push_back({"a", t.actions});
    arrays.push_back({"r", t.rewards});
    arrays.push_back({"x_next", t.x_next});
  }
  nn::write_arrays(os, arrays);
}

void ReplayBuffer::read(std::istream& is) {
  const nn::FileHeader h = nn::read_header(is, "CARAREPLAY 1");
  auto expect = [&](const char* key, std::size_t value) {
    if (h.at(key) != std::to_string(value))
      throw std::runtime_error(std::string("replay buffer ") + key + " is " + h.at(key) +
                               ", expected " + std::to_string(value));
  };
  expect("capacity", capacity_);
  expect("agents", agents_);
  expect("action_length", action_length_);
  expect("obs_width", obs_width_);
  const std::size_t n = std::stoul(h.at("size"));
  const std::size_t pushed = std::stoul(h.at("pushed"));
  const auto arrays = nn::read_arrays(is, 4 * n);

  // Stored oldest-first; after reloading the ring starts at slot 0, which
  // preserves the logical order that at() and sampling depend on.
  items_.clear();
  head_ = 0;
  pushed_ = 0;
  for (std::size_t i = 0; i < n; ++i)
    push({arrays[4 * i].values, arrays[4 * i + 1].values, arrays[4 * i + 2].values,
          arrays[4 * i + 3].values});
  pushed_ = pushed;
}

}  // namespace cara::marl
