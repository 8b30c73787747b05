#include "ira/memory/action_buffer.hpp"

#include <algorithm>
#include <string>

#include "ira/error.hpp"

namespace ira::memory {

ActionBuffer::ActionBuffer(std::size_t capacity, int action_dim)
    : capacity_(capacity), action_dim_(action_dim), columns_(static_cast<std::size_t>(action_dim)) {
  if (capacity == 0) throw ConfigError("action buffer capacity must be positive");
  if (action_dim <= 0) throw DimensionError("action buffer dimension must be positive");
}

void ActionBuffer::push(const Vector& action) {
  if (action.size() != action_dim_) {
    throw DimensionError("action buffer: action has " + std::to_string(action.size()) +
                         " entries, expected " + std::to_string(action_dim_));
  }
  if (cursor_ == sequence_.size()) {
    sequence_.push_back(0);
    for (auto& col : columns_) col.push_back(0.0);
  }
  for (int j = 0; j < action_dim_; ++j) columns_[static_cast<std::size_t>(j)][cursor_] = action(j);
  sequence_[cursor_] = next_sequence_++;
  cursor_ = (cursor_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

std::size_t ActionBuffer::slot_of_age(std::size_t age) const {
  if (age >= size_) {
    throw EmptyBufferError("action buffer: index " + std::to_string(age) + " out of range");
  }
  return size_ < capacity_ ? age : (cursor_ + age) % capacity_;
}

Vector ActionBuffer::action_in_slot(std::size_t slot) const {
  Vector a(action_dim_);
  for (int j = 0; j < action_dim_; ++j) a(j) = columns_[static_cast<std::size_t>(j)][slot];
  return a;
}

Vector ActionBuffer::at(std::size_t age) const { return action_in_slot(slot_of_age(age)); }

std::array<ActionBuffer::SlotRange, 2> ActionBuffer::slots_by_age() const {
  if (size_ < capacity_) return {SlotRange{0, size_}, SlotRange{0, 0}};
  return {SlotRange{cursor_, capacity_}, SlotRange{0, cursor_}};
}

std::vector<double> ActionBuffer::rows_by_age() const {
  std::vector<double> out;
  out.reserve(size_ * static_cast<std::size_t>(action_dim_));
  for (std::size_t age = 0; age < size_; ++age) {
    const std::size_t slot = slot_of_age(age);
    for (int j = 0; j < action_dim_; ++j) out.push_back(columns_[static_cast<std::size_t>(j)][slot]);
  }
  return out;
}

}  // namespace ira::memory
