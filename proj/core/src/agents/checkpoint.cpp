#include "ira/agents/checkpoint.hpp"

#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ira/error.hpp"
#include "ira/memory/dump.hpp"

namespace ira::agents {

namespace {

constexpr int kCheckpointVersion = 1;

using numerics::Activation;
using numerics::MlpGrads;

struct NetworkRef {
  const char* name;
  MlpParams AgentState::*params;
};

constexpr NetworkRef kNetworks[] = {
    {"actor", &AgentState::actor},
    {"actor_target", &AgentState::actor_target},
    {"critic1", &AgentState::critic1},
    {"critic2", &AgentState::critic2},
    {"critic1_target", &AgentState::critic1_target},
    {"critic2_target", &AgentState::critic2_target},
};

struct OptimizerRef {
  const char* name;
  AdamState AgentState::*state;
};

constexpr OptimizerRef kOptimizers[] = {
    {"actor_opt", &AgentState::actor_opt},
    {"critic1_opt", &AgentState::critic1_opt},
    {"critic2_opt", &AgentState::critic2_opt},
};

memory::BufferBlock to_block(const numerics::Matrix& m) {
  const auto rows = static_cast<std::uint64_t>(m.rows());
  const auto cols = static_cast<std::uint64_t>(m.cols());
  return {rows, rows, cols, std::vector<double>(m.data(), m.data() + m.size())};
}

memory::BufferBlock to_block(const numerics::RowVector& v) {
  const auto n = static_cast<std::uint64_t>(v.size());
  return {1, 1, n, std::vector<double>(v.data(), v.data() + v.size())};
}

void read_into(std::istream& in, numerics::Matrix& m) {
  const auto block = memory::read_block(in);
  m.resize(static_cast<Eigen::Index>(block.size), static_cast<Eigen::Index>(block.dim));
  std::copy(block.values.begin(), block.values.end(), m.data());
}

void read_into(std::istream& in, numerics::RowVector& v) {
  const auto block = memory::read_block(in);
  v.resize(static_cast<Eigen::Index>(block.dim));
  std::copy(block.values.begin(), block.values.end(), v.data());
}

Activation parse_activation(const std::string& s) {
  if (s == "relu") return Activation::relu;
  if (s == "tanh") return Activation::tanh;
  if (s == "identity") return Activation::identity;
  throw IoError("checkpoint: unknown activation '" + s + "'");
}

}  // namespace

void save_checkpoint(const AgentState& agent, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream bin(dir / "params.bin", std::ios::binary | std::ios::trunc);
  if (!bin) throw IoError("cannot open '" + (dir / "params.bin").string() + "' for writing");

  nlohmann::json manifest;
  manifest["format_version"] = kCheckpointVersion;
  manifest["state_dim"] = agent.state_dim;
  manifest["action_dim"] = agent.action_dim;
  manifest["action_bound"] = agent.action_bound;
  manifest["step_counter"] = agent.step_counter;
  manifest["critic_updates"] = agent.critic_updates;
  manifest["actor_updates"] = agent.actor_updates;

  for (const auto& net : kNetworks) {
    const MlpParams& params = agent.*(net.params);
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& layer : params.layers) {
      layers.push_back({{"out", layer.out_dim()},
                        {"in", layer.in_dim()},
                        {"activation", std::string(numerics::to_string(layer.activation))}});
      memory::write_block(bin, to_block(layer.weight));
      memory::write_block(bin, to_block(layer.bias));
    }
    manifest["networks"].push_back({{"name", net.name}, {"layers", layers}});
  }
  for (const auto& opt : kOptimizers) {
    const AdamState& state = agent.*(opt.state);
    for (const MlpGrads* moment : {&state.m, &state.v}) {
      for (const auto& layer : moment->layers) {
        memory::write_block(bin, to_block(layer.weight));
        memory::write_block(bin, to_block(layer.bias));
      }
    }
    manifest["optimizers"].push_back({{"name", opt.name},
                                      {"step_count", state.step_count},
                                      {"beta1", state.config.beta1},
                                      {"beta2", state.config.beta2},
                                      {"epsilon", state.config.epsilon}});
  }
  if (!bin) throw IoError("checkpoint: write failed");

  std::ofstream json(dir / "checkpoint.json", std::ios::trunc);
  if (!json) throw IoError("cannot open '" + (dir / "checkpoint.json").string() + "' for writing");
  json << manifest.dump(2) << '\n';
}

AgentState load_checkpoint(const std::filesystem::path& dir) {
  std::ifstream json(dir / "checkpoint.json");
  if (!json) throw IoError("cannot open '" + (dir / "checkpoint.json").string() + "'");
  const auto manifest = nlohmann::json::parse(json);
  if (manifest.at("format_version").get<int>() != kCheckpointVersion) {
    throw IoError("checkpoint: unsupported format version");
  }
  std::ifstream bin(dir / "params.bin", std::ios::binary);
  if (!bin) throw IoError("cannot open '" + (dir / "params.bin").string() + "'");

  AgentState agent;
  agent.state_dim = manifest.at("state_dim").get<int>();
  agent.action_dim = manifest.at("action_dim").get<int>();
  agent.action_bound = manifest.at("action_bound").get<double>();
  agent.step_counter = manifest.at("step_counter").get<std::int64_t>();
  agent.critic_updates = manifest.at("critic_updates").get<std::int64_t>();
  agent.actor_updates = manifest.at("actor_updates").get<std::int64_t>();

  const auto& networks = manifest.at("networks");
  for (std::size_t n = 0; n < std::size(kNetworks); ++n) {
    MlpParams& params = agent.*(kNetworks[n].params);
    for (const auto& layer_json : networks.at(n).at("layers")) {
      numerics::DenseLayer layer;
      layer.activation = parse_activation(layer_json.at("activation").get<std::string>());
      read_into(bin, layer.weight);
      read_into(bin, layer.bias);
      params.layers.push_back(std::move(layer));
    }
    params.validate();
  }
  const auto& optimizers = manifest.at("optimizers");
  for (std::size_t o = 0; o < std::size(kOptimizers); ++o) {
    AdamState& state = agent.*(kOptimizers[o].state);
    const auto& entry = optimizers.at(o);
    state.step_count = entry.at("step_count").get<std::int64_t>();
    state.config.beta1 = entry.at("beta1").get<double>();
    state.config.beta2 = entry.at("beta2").get<double>();
    state.config.epsilon = entry.at("epsilon").get<double>();
    // Moments mirror the network the optimizer belongs to.
    const MlpParams& owner = o == 0 ? agent.actor : (o == 1 ? agent.critic1 : agent.critic2);
    state.m = MlpGrads::zeros_like(owner);
    state.v = MlpGrads::zeros_like(owner);
    for (MlpGrads* moment : {&state.m, &state.v}) {
      for (auto& layer : moment->layers) {
        read_into(bin, layer.weight);
        read_into(bin, layer.bias);
      }
    }
  }
  return agent;
}

}  // namespace ira::agents
