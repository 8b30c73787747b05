#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ira/numerics/rng.hpp"
#include "ira/numerics/tensor.hpp"

namespace ira::memory {

using numerics::Matrix;
using numerics::Rng;
using numerics::Vector;

struct Transition {
  Vector state;
  Vector action;
  double reward = 0.0;
  Vector next_state;
  bool terminated = false;
  bool truncated = false;
};

/// Structure-of-matrices view of a sampled minibatch.
struct TransitionBatch {
  Matrix states;
  Matrix actions;
  Vector rewards;
  Matrix next_states;
  Vector terminated;  // 1.0 for true terminal states, else 0.0
  Vector truncated;

  Eigen::Index size() const { return states.rows(); }
  Transition transition(Eigen::Index i) const;
};

inline constexpr std::size_t kDefaultReplayCapacity = 1'000'000;

/// FIFO ring of transitions; storage grows on demand up to `capacity`.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, int state_dim, int action_dim);

  void push(const Transition& t);

  /// `batch_size` uniform draws with replacement. Throws EmptyBufferError when empty.
  TransitionBatch sample(std::size_t batch_size, Rng& rng) const;

  /// Entry by age: 0 is the oldest retained transition.
  Transition at(std::size_t age) const;

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  int state_dim() const { return state_dim_; }
  int action_dim() const { return action_dim_; }
  /// Width of one flattened row: state, action, reward, next_state, terminated, truncated.
  std::size_t row_width() const { return width_; }

  /// Flattened rows oldest first; the layout used by the dump format.
  std::vector<double> rows_by_age() const;

 private:
  std::size_t slot_of_age(std::size_t age) const;
  const double* row(std::size_t slot) const { return storage_.data() + slot * width_; }

  std::size_t capacity_;
  int state_dim_;
  int action_dim_;
  std::size_t width_;
  std::vector<double> storage_;
  std::size_t cursor_ = 0;
  std::size_t size_ = 0;
};

}  // namespace ira::memory
