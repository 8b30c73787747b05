#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ira/numerics/tensor.hpp"

namespace ira::memory {

using numerics::Vector;

inline constexpr std::size_t kDefaultActionBufferCapacity = 200'000;

/// FIFO ring of executed actions. Coordinates are stored column-wise so a
/// distance scan over the whole buffer vectorizes; every slot also records its
/// insertion sequence number, which orders ties by age.
class ActionBuffer {
 public:
  ActionBuffer(std::size_t capacity, int action_dim);

  void push(const Vector& action);

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  int action_dim() const { return action_dim_; }
  bool empty() const { return size_ == 0; }

  /// Entry by age, 0 being the oldest retained action.
  Vector at(std::size_t age) const;
  std::uint64_t sequence_at(std::size_t age) const { return sequence_[slot_of_age(age)]; }

  Vector action_in_slot(std::size_t slot) const;
  std::uint64_t sequence_in_slot(std::size_t slot) const { return sequence_[slot]; }
  const double* column(int dim) const { return columns_[static_cast<std::size_t>(dim)].data(); }

  /// Physical slot ranges covering the buffer oldest-first: [first) then [second).
  struct SlotRange {
    std::size_t begin;
    std::size_t end;
  };
  std::array<SlotRange, 2> slots_by_age() const;

  /// Row-major actions oldest first; the layout used by the dump format.
  std::vector<double> rows_by_age() const;

 private:
  std::size_t slot_of_age(std::size_t age) const;

  std::size_t capacity_;
  int action_dim_;
  std::vector<std::vector<double>> columns_;
  std::vector<std::uint64_t> sequence_;
  std::size_t cursor_ = 0;
  std::size_t size_ = 0;
  std::uint64_t next_sequence_ = 0;
};

}  // namespace ira::memory
