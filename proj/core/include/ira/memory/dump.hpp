#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "ira/memory/action_buffer.hpp"
#include "ira/memory/replay_buffer.hpp"

namespace ira::memory {

/// One block of the little-endian buffer dump:
///   u32 magic "IRAB", u32 version, u64 capacity, u64 size, u64 dim,
///   then size * dim float64 values, row-major.
struct BufferBlock {
  static constexpr std::uint32_t kMagic = 0x42415249;  // bytes "IRAB"
  static constexpr std::uint32_t kVersion = 1;

  std::uint64_t capacity = 0;
  std::uint64_t size = 0;
  std::uint64_t dim = 0;
  std::vector<double> values;
};

void write_block(std::ostream& out, const BufferBlock& block);
/// Throws IoError on a truncated stream, a bad magic or an unknown version.
BufferBlock read_block(std::istream& in);

void save_buffer(const ReplayBuffer& buffer, const std::filesystem::path& path);
void save_buffer(const ActionBuffer& buffer, const std::filesystem::path& path);

/// Restores entries oldest first; dimensions must match the dump.
ReplayBuffer load_replay_buffer(const std::filesystem::path& path, int state_dim, int action_dim);
ActionBuffer load_action_buffer(const std::filesystem::path& path);

}  // namespace ira::memory
