#pragma once

#include <filesystem>

#include "ira/agents/agent.hpp"

namespace ira::agents {

/// Writes `params.bin` (one buffer-dump block per weight/bias tensor of every
/// network and optimizer moment) and `checkpoint.json` (layout, activations,
/// counters) into `dir`, creating it if needed.
void save_checkpoint(const AgentState& agent, const std::filesystem::path& dir);

/// Bit-exact inverse of save_checkpoint.
AgentState load_checkpoint(const std::filesystem::path& dir);

}  // namespace ira::agents
