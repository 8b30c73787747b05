#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "ira/agents/config.hpp"
#include "ira/memory/action_buffer.hpp"
#include "ira/memory/replay_buffer.hpp"
#include "ira/numerics/adam.hpp"
#include "ira/numerics/mlp.hpp"

namespace ira::agents {

using memory::TransitionBatch;
using numerics::AdamState;
using numerics::Matrix;
using numerics::MlpGrads;
using numerics::MlpParams;
using numerics::Rng;
using numerics::Vector;

/// Actor, twin critics, their target copies and optimizer state.
/// Single-critic variants leave critic2 and its target untouched.
struct AgentState {
  MlpParams actor;
  MlpParams actor_target;
  MlpParams critic1;
  MlpParams critic2;
  MlpParams critic1_target;
  MlpParams critic2_target;
  AdamState actor_opt;
  AdamState critic1_opt;
  AdamState critic2_opt;

  int state_dim = 0;
  int action_dim = 0;
  double action_bound = 1.0;

  std::int64_t step_counter = 0;  // training steps taken
  std::int64_t critic_updates = 0;
  std::int64_t actor_updates = 0;
};

/// Actor [state, hidden..., action] relu/tanh scaled by the bound; critics
/// [state + action, hidden..., 1] relu/identity. Targets start as exact copies.
AgentState make_agent(int state_dim, int action_dim, double action_bound, const AlgoConfig& config,
                      Rng& init_rng);

/// bound * actor(states), one row per state.
Matrix policy_actions(const MlpParams& actor, const Matrix& states, double action_bound);
Vector policy_action(const MlpParams& actor, const Vector& state, double action_bound);

/// clip(pi(s) + N(0, (sigma * bound)^2), +-bound). Always draws one normal per
/// action coordinate, also when sigma is 0.
Vector select_action(const MlpParams& actor, const Vector& state, double exploration_sigma, Rng& rng,
                     double action_bound);

/// [states | actions], the critic input layout.
Matrix critic_input(const Matrix& states, const Matrix& actions);

struct TargetOptions {
  double gamma = 0.99;
  double policy_noise = 0.2;  // in units of the action bound
  double noise_clip = 0.5;    // in units of the action bound
  double action_bound = 1.0;
  /// Twin targets: min over both critics plus clipped smoothing noise on the
  /// target action. Otherwise the first critic alone, no noise.
  bool twin = true;
};

/// y = r + gamma * (1 - terminated) * Q'(s', a~'). Truncated transitions bootstrap.
Vector td_target(const TransitionBatch& batch, const MlpParams& actor_target,
                 std::span<const MlpParams* const> critic_targets, const TargetOptions& options,
                 Rng& rng);

/// Encoder output (last hidden activation) of the critic for each (s, a) row.
Matrix critic_representation(const MlpParams& critic, const Matrix& states, const Matrix& actions);

/// Inputs of the representation-discrepancy term for one minibatch.
struct RdeInputs {
  const Matrix* states = nullptr;
  const Matrix* policy_actions = nullptr;  // pi(s), held constant
  const Matrix* runner_up = nullptr;       // a~_sub per row
  double alpha = 0.0;
};

struct LossAndGrads {
  double value = 0.0;
  MlpGrads grads;
};

/// alpha * mean_b <phi(s, pi(s); online encoder), phi(s, a_sub; target encoder)>.
/// Gradients reach only the online encoder; the head receives zero.
LossAndGrads rde_loss_and_grads(const MlpParams& critic, const MlpParams& critic_target,
                                const RdeInputs& inputs);
double rde_loss(const MlpParams& critic, const MlpParams& critic_target, const Matrix& states,
                const Matrix& policy_actions, const Matrix& runner_up, double alpha);

struct CriticLoss {
  double td_loss = 0.0;    // mean squared TD error
  double rde_value = 0.0;  // zero when the term is off
  MlpGrads grads;
};

/// mean (Q(s, a) - y)^2, plus the RDE term when `rde` is given and alpha > 0.
CriticLoss critic_loss_and_grads(const MlpParams& critic, const MlpParams& critic_target,
                                 const Matrix& states, const Matrix& actions, const Vector& targets,
                                 const RdeInputs* rde);

/// Per-row anchors retrieved from the action buffer for a minibatch.
struct RetrospectBatch {
  Matrix policy_actions;  // pi(s), the retrieval query
  Matrix best;            // a~_opt
  Matrix runner_up;       // a~_sub (unused by nearest-only retrieval)
};

struct CriticStats {
  double td_loss = 0.0;    // summed over the critics that were updated
  double rde_value = 0.0;  // summed over the critics that were updated
};

/// One Adam step on each critic. The RDE term is applied only when
/// config.use_rde, alpha > 0 and `retro` is present.
CriticStats critic_update(AgentState& agent, const TransitionBatch& batch, const RetrospectBatch* retro,
                          const AlgoConfig& config, Rng& smoothing_rng);

/// Loss minimized by the actor: -mean Q1(s, pi(s)) + mu * mean |pi(s) - a_opt|^2.
/// The penalty is dropped when `anchors` is null or mu is zero.
LossAndGrads actor_loss_and_grads(const MlpParams& actor, const MlpParams& critic, const Matrix& states,
                                  const Matrix* anchors, double mu, double action_bound);

/// One Adam step on the actor; returns the loss before the step.
double actor_update(AgentState& agent, const Matrix& states, const Matrix* anchors, double mu,
                    const AlgoConfig& config);

/// target <- tau * online + (1 - tau) * target, elementwise.
void soft_update(MlpParams& target, const MlpParams& online, double tau);

/// The single closest buffered action under the Chebyshev distance.
Vector nn_full_buffer(const Vector& query, const memory::ActionBuffer& buffer);

/// Retrieval for a sampled batch: k-NN around pi(s) ranked by the target
/// critics, or the nearest action for nearest-only variants. Returns nullopt
/// when the buffer holds too few actions (fewer than 2, or 0 for nearest-only).
std::optional<RetrospectBatch> retrieve(const AgentState& agent, const Matrix& states,
                                        const memory::ActionBuffer& buffer, const AlgoConfig& config);

struct StepStats {
  double td_loss = 0.0;
  double rde_value = 0.0;
  std::optional<double> actor_loss;  // set on steps that update the actor
  bool retrospect_used = false;
};

struct StepStreams {
  Rng* sampling = nullptr;
  Rng* smoothing = nullptr;
};

/// One learner iteration: sample, retrieve, critic update, and every d-th
/// step the actor update followed by soft target updates.
StepStats train_step(AgentState& agent, const memory::ReplayBuffer& replay,
                     const memory::ActionBuffer& actions, std::size_t batch_size, double mu,
                     const AlgoConfig& config, const StepStreams& streams);

}  // namespace ira::agents
