#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ira/agents/config.hpp"

namespace ira::harness {

enum class MuShape { linear, exponential };

std::string_view to_string(MuShape s);
MuShape parse_mu_shape(std::string_view text);

/// Everything a training run depends on.
struct RunConfig {
  std::string env_id = "pendulum";
  agents::AlgoConfig algo = agents::AlgoConfig::defaults_for(agents::Algorithm::ira);
  std::string label;  // name used when aggregating; defaults to the algorithm
  std::int64_t total_steps = 30'000;
  std::int64_t eval_interval = 5'000;
  int eval_episodes = 10;
  std::uint64_t seed = 0;
  std::size_t batch_size = 256;
  std::size_t replay_capacity = 1'000'000;
  std::size_t action_buffer_capacity = 200'000;
  std::int64_t warmup_steps = 1'000;
  MuShape mu_shape = MuShape::linear;
  std::size_t probe_samples = 100;
  int probe_horizon = 0;  // 0: roll out to the end of the episode
  std::int64_t log_interval = 1'000;
  std::filesystem::path output_dir;

  std::string resolved_label() const;
  /// Throws ConfigError on an invalid combination.
  void validate() const;
  nlohmann::json to_json() const;
};

using Setting = std::pair<std::string, std::string>;

/// Applies one `key = value` pair; keys are the CLI flag names without dashes
/// prefix ("mu-start", "no-rde", ...). Throws ConfigError on unknown keys or
/// unparsable values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Builds a config from ordered settings where later entries override earlier
/// ones. "algo" is applied first so per-algorithm defaults never clobber an
/// explicit flag.
RunConfig resolve_config(const std::vector<Setting>& settings);

/// Parses the flat key-value format: one `key = value` (or `key value`) per
/// line, `#` starts a comment, blank lines ignored.
std::vector<Setting> parse_settings(std::string_view text);
std::vector<Setting> read_settings_file(const std::filesystem::path& path);

/// Keys understood by apply_setting, in documentation order.
const std::vector<std::string>& setting_keys();

}  // namespace ira::harness
