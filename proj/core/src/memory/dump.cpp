#include "ira/memory/dump.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "ira/error.hpp"

namespace ira::memory {

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw IoError("buffer dump: unexpected end of stream");
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

}  // namespace

void write_block(std::ostream& out, const BufferBlock& block) {
  if (block.values.size() != block.size * block.dim) {
    throw DimensionError("buffer dump: value count does not match size * dim");
  }
  put_le<std::uint32_t>(out, BufferBlock::kMagic);
  put_le<std::uint32_t>(out, BufferBlock::kVersion);
  put_le<std::uint64_t>(out, block.capacity);
  put_le<std::uint64_t>(out, block.size);
  put_le<std::uint64_t>(out, block.dim);
  for (double v : block.values) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw IoError("buffer dump: write failed");
}

BufferBlock read_block(std::istream& in) {
  const auto magic = get_le<std::uint32_t>(in);
  if (magic != BufferBlock::kMagic) throw IoError("buffer dump: bad magic");
  const auto version = get_le<std::uint32_t>(in);
  if (version != BufferBlock::kVersion) {
    throw IoError("buffer dump: unsupported version " + std::to_string(version));
  }
  BufferBlock block;
  block.capacity = get_le<std::uint64_t>(in);
  block.size = get_le<std::uint64_t>(in);
  block.dim = get_le<std::uint64_t>(in);
  block.values.resize(block.size * block.dim);
  for (auto& v : block.values) v = std::bit_cast<double>(get_le<std::uint64_t>(in));
  return block;
}

void save_buffer(const ReplayBuffer& buffer, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_block(out, BufferBlock{buffer.capacity(), buffer.size(), buffer.row_width(), buffer.rows_by_age()});
}

void save_buffer(const ActionBuffer& buffer, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_block(out, BufferBlock{buffer.capacity(), buffer.size(),
                               static_cast<std::uint64_t>(buffer.action_dim()), buffer.rows_by_age()});
}

ReplayBuffer load_replay_buffer(const std::filesystem::path& path, int state_dim, int action_dim) {
  auto in = open_in(path);
  const BufferBlock block = read_block(in);
  ReplayBuffer buffer(block.capacity, state_dim, action_dim);
  if (block.dim != buffer.row_width()) {
    throw DimensionError("replay dump has rows of width " + std::to_string(block.dim) + ", expected " +
                         std::to_string(buffer.row_width()));
  }
  const auto sd = static_cast<Eigen::Index>(state_dim);
  const auto ad = static_cast<Eigen::Index>(action_dim);
  for (std::uint64_t i = 0; i < block.size; ++i) {
    const double* r = block.values.data() + i * block.dim;
    Transition t;
    t.state = Eigen::Map<const Vector>(r, sd);
    t.action = Eigen::Map<const Vector>(r + sd, ad);
    t.reward = r[sd + ad];
    t.next_state = Eigen::Map<const Vector>(r + sd + ad + 1, sd);
    t.terminated = r[2 * sd + ad + 1] != 0.0;
    t.truncated = r[2 * sd + ad + 2] != 0.0;
    buffer.push(t);
  }
  return buffer;
}

ActionBuffer load_action_buffer(const std::filesystem::path& path) {
  auto in = open_in(path);
  const BufferBlock block = read_block(in);
  ActionBuffer buffer(block.capacity, static_cast<int>(block.dim));
  for (std::uint64_t i = 0; i < block.size; ++i) {
    buffer.push(Eigen::Map<const Vector>(block.values.data() + i * block.dim,
                                         static_cast<Eigen::Index>(block.dim)));
  }
  return buffer;
}

}  // namespace ira::memory
