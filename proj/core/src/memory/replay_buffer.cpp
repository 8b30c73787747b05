#include "ira/memory/replay_buffer.hpp"

#include <algorithm>
#include <string>

#include "ira/error.hpp"

namespace ira::memory {

Transition TransitionBatch::transition(Eigen::Index i) const {
  return Transition{states.row(i).transpose(), actions.row(i).transpose(), rewards(i),
                    next_states.row(i).transpose(), terminated(i) != 0.0, truncated(i) != 0.0};
}

ReplayBuffer::ReplayBuffer(std::size_t capacity, int state_dim, int action_dim)
    : capacity_(capacity),
      state_dim_(state_dim),
      action_dim_(action_dim),
      width_(static_cast<std::size_t>(2 * state_dim + action_dim + 3)) {
  if (capacity == 0) throw ConfigError("replay buffer capacity must be positive");
  if (state_dim <= 0 || action_dim <= 0) throw DimensionError("replay buffer dimensions must be positive");
  storage_.reserve(std::min<std::size_t>(capacity, 4096) * width_);
}

void ReplayBuffer::push(const Transition& t) {
  if (t.state.size() != state_dim_ || t.next_state.size() != state_dim_ ||
      t.action.size() != action_dim_) {
    throw DimensionError("replay buffer: transition dimensions do not match the buffer");
  }
  if (cursor_ * width_ == storage_.size()) storage_.resize(storage_.size() + width_);
  double* out = storage_.data() + cursor_ * width_;
  out = std::copy_n(t.state.data(), state_dim_, out);
  out = std::copy_n(t.action.data(), action_dim_, out);
  *out++ = t.reward;
  out = std::copy_n(t.next_state.data(), state_dim_, out);
  *out++ = t.terminated ? 1.0 : 0.0;
  *out = t.truncated ? 1.0 : 0.0;
  cursor_ = (cursor_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

TransitionBatch ReplayBuffer::sample(std::size_t batch_size, Rng& rng) const {
  if (size_ == 0) throw EmptyBufferError("replay buffer: cannot sample from an empty buffer");
  const auto n = static_cast<Eigen::Index>(batch_size);
  TransitionBatch batch{Matrix(n, state_dim_), Matrix(n, action_dim_), Vector(n),
                        Matrix(n, state_dim_), Vector(n), Vector(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* r = row(static_cast<std::size_t>(rng.uniform_index(size_)));
    std::copy_n(r, state_dim_, batch.states.row(i).data());
    r += state_dim_;
    std::copy_n(r, action_dim_, batch.actions.row(i).data());
    r += action_dim_;
    batch.rewards(i) = *r++;
    std::copy_n(r, state_dim_, batch.next_states.row(i).data());
    r += state_dim_;
    batch.terminated(i) = *r++;
    batch.truncated(i) = *r;
  }
  return batch;
}

std::size_t ReplayBuffer::slot_of_age(std::size_t age) const {
  return size_ < capacity_ ? age : (cursor_ + age) % capacity_;
}

Transition ReplayBuffer::at(std::size_t age) const {
  if (age >= size_) {
    throw EmptyBufferError("replay buffer: index " + std::to_string(age) + " out of range");
  }
  const double* r = row(slot_of_age(age));
  Transition t;
  t.state = Eigen::Map<const Vector>(r, state_dim_);
  r += state_dim_;
  t.action = Eigen::Map<const Vector>(r, action_dim_);
  r += action_dim_;
  t.reward = *r++;
  t.next_state = Eigen::Map<const Vector>(r, state_dim_);
  r += state_dim_;
  t.terminated = *r++ != 0.0;
  t.truncated = *r != 0.0;
  return t;
}

std::vector<double> ReplayBuffer::rows_by_age() const {
  std::vector<double> out;
  out.reserve(size_ * width_);
  for (std::size_t age = 0; age < size_; ++age) {
    const double* r = row(slot_of_age(age));
    out.insert(out.end(), r, r + width_);
  }
  return out;
}

}  // namespace ira::memory
