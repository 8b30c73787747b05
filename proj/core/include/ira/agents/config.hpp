#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "ira/memory/knn.hpp"

namespace ira::agents {

enum class Algorithm { ddpg, td3, ira, ira_ddpg, nntd3 };

std::string_view to_string(Algorithm a);
/// Accepts the CLI spellings ("ira-ddpg") as well as "ira_ddpg".
Algorithm parse_algorithm(std::string_view text);

/// Learner hyperparameters with IRA defaults. `defaults_for` sets the feature
/// flags and the policy update period of each algorithm.
struct AlgoConfig {
  Algorithm algorithm = Algorithm::ira;
  bool use_rde = true;
  bool use_gag = true;
  int d = 1;                 // actor/target update period
  double alpha = 5e-4;       // RDE strength
  std::size_t k = 10;        // neighbors retrieved per state
  double mu_start = 1.0;     // GAG strength at t = 0
  double mu_end = 0.1;       // GAG strength at t = total_steps
  double gamma = 0.99;
  double tau = 0.005;
  double policy_noise = 0.2;  // target smoothing, in units of the action bound
  double noise_clip = 0.5;    // in units of the action bound
  double exploration_sigma = 0.1;  // in units of the action bound
  double actor_lr = 3e-4;
  double critic_lr = 3e-4;
  memory::Metric metric = memory::Metric::linf;
  std::vector<std::size_t> hidden_sizes{256, 256};

  static AlgoConfig defaults_for(Algorithm algorithm);

  /// Two critics, min-of-targets and target smoothing (the TD3 family).
  bool twin() const;
  bool uses_retrieval() const { return use_rde || use_gag; }
  /// NNTD3 anchors on the single nearest buffered action without Q ranking.
  bool nearest_only() const { return algorithm == Algorithm::nntd3; }

  /// Throws ConfigError if any invariant is violated.
  void validate() const;
};

}  // namespace ira::agents
