#include "ira/agents/config.hpp"

#include <string>

#include "ira/error.hpp"

namespace ira::agents {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::ddpg:
      return "ddpg";
    case Algorithm::td3:
      return "td3";
    case Algorithm::ira:
      return "ira";
    case Algorithm::ira_ddpg:
      return "ira-ddpg";
    case Algorithm::nntd3:
      return "nntd3";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view text) {
  if (text == "ddpg") return Algorithm::ddpg;
  if (text == "td3") return Algorithm::td3;
  if (text == "ira") return Algorithm::ira;
  if (text == "ira-ddpg" || text == "ira_ddpg") return Algorithm::ira_ddpg;
  if (text == "nntd3") return Algorithm::nntd3;
  throw ConfigError("unknown algorithm '" + std::string(text) + "'");
}

AlgoConfig AlgoConfig::defaults_for(Algorithm algorithm) {
  AlgoConfig c;
  c.algorithm = algorithm;
  switch (algorithm) {
    case Algorithm::ddpg:
      c.use_rde = c.use_gag = false;
      c.d = 1;
      break;
    case Algorithm::td3:
      c.use_rde = c.use_gag = false;
      c.d = 2;
      break;
    case Algorithm::ira:
    case Algorithm::ira_ddpg:
      c.use_rde = c.use_gag = true;
      c.d = 1;
      break;
    case Algorithm::nntd3:
      c.use_rde = false;
      c.use_gag = true;
      c.d = 2;
      break;
  }
  return c;
}

bool AlgoConfig::twin() const {
  return algorithm == Algorithm::td3 || algorithm == Algorithm::ira || algorithm == Algorithm::nntd3;
}

void AlgoConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("invalid config: " + what); };
  if (d != 1 && d != 2) fail("d must be 1 or 2");
  if (!(alpha >= 0.0)) fail("alpha must be >= 0");
  if (uses_retrieval() && !nearest_only() && k < 2) fail("k must be >= 2 when RDE or GAG is on");
  if (nearest_only() && use_rde) fail("nntd3 has no RDE term");
  if (!(tau > 0.0 && tau <= 1.0)) fail("tau must lie in (0, 1]");
  if (!(gamma >= 0.0 && gamma < 1.0)) fail("gamma must lie in [0, 1)");
  if (!(mu_start >= 0.0 && mu_end >= 0.0)) fail("mu must be >= 0");
  if (!(policy_noise >= 0.0 && noise_clip >= 0.0 && exploration_sigma >= 0.0)) {
    fail("noise scales must be >= 0");
  }
  if (!(actor_lr > 0.0 && critic_lr > 0.0)) fail("learning rates must be positive");
  if (hidden_sizes.empty()) fail("at least one hidden layer is required");
  for (auto w : hidden_sizes) {
    if (w == 0) fail("hidden widths must be positive");
  }
}

}  // namespace ira::agents
