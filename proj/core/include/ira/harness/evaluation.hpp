#pragma once

#include <cstddef>
#include <functional>
#include <string_view>

#include "ira/agents/agent.hpp"
#include "ira/envs/environment.hpp"
#include "ira/memory/replay_buffer.hpp"

namespace ira::harness {

using numerics::Matrix;
using numerics::Rng;

/// Maps a batch of observations (one per row) to actions (one per row).
using BatchPolicy = std::function<Matrix(const Matrix& states)>;

struct EvalResult {
  double mean_return = 0.0;
  double std_return = 0.0;  // population std over episodes
};

/// Runs `episodes` independent episodes in lockstep and returns statistics of
/// the undiscounted episode returns. Initial states are drawn from `eval_rng`
/// in episode order before any step is taken.
EvalResult evaluate(const BatchPolicy& policy, const envs::Environment& prototype, int episodes, Rng& eval_rng);

/// Noiseless actor evaluation.
EvalResult evaluate(const numerics::MlpParams& actor, double action_bound, std::string_view env_id, int episodes,
                    Rng& eval_rng);

/// Uniform random actions in the action box, drawn from `action_rng`.
EvalResult evaluate_random(std::string_view env_id, int episodes, Rng& eval_rng, Rng& action_rng);

struct ProbeResult {
  double predicted_q = 0.0;
  double true_q = 0.0;

  double bias() const { return predicted_q - true_q; }
};

struct ProbeOptions {
  double gamma = 0.99;
  std::size_t n_samples = 100;
  int horizon = 0;  // steps per rollout; 0 means until the episode ends
  bool twin = true; // min over both critics, else critic1 alone
};

/// Compares the critic estimate at buffer states with the discounted return
/// of the noiseless policy rolled out from the same states. Throws
/// EmptyBufferError on an empty buffer and propagates the environment's error
/// if it cannot be set to a sampled state.
ProbeResult overestimation_probe(const agents::AgentState& agent, const envs::Environment& prototype,
                                 const memory::ReplayBuffer& replay, const ProbeOptions& options, Rng& rng);
ProbeResult overestimation_probe(const agents::AgentState& agent, std::string_view env_id,
                                 const memory::ReplayBuffer& replay, const ProbeOptions& options, Rng& rng);

}  // namespace ira::harness
