#include "ira/agents/agent.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ira/error.hpp"
#include "ira/memory/knn.hpp"

namespace ira::agents {

using numerics::Activation;
using numerics::BackwardOptions;
using numerics::InitScheme;

namespace {

MlpParams build_network(std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out,
                        Activation head, InitScheme scheme, Rng& rng) {
  std::vector<std::size_t> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  std::vector<Activation> acts(hidden.size(), Activation::relu);
  acts.push_back(head);
  return numerics::init_params(sizes, acts, rng, scheme);
}

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) throw NonFiniteError(std::string(what) + " is not finite");
}

}  // namespace

AgentState make_agent(int state_dim, int action_dim, double action_bound, const AlgoConfig& config,
                      Rng& init_rng) {
  config.validate();
  if (state_dim <= 0 || action_dim <= 0) throw DimensionError("agent dimensions must be positive");
  if (!(action_bound > 0.0)) throw ConfigError("action bound must be positive");

  AgentState agent;
  agent.state_dim = state_dim;
  agent.action_dim = action_dim;
  agent.action_bound = action_bound;
  const auto sd = static_cast<std::size_t>(state_dim);
  const auto ad = static_cast<std::size_t>(action_dim);

  agent.actor = build_network(sd, config.hidden_sizes, ad, Activation::tanh, InitScheme::actor, init_rng);
  agent.critic1 = build_network(sd + ad, config.hidden_sizes, 1, Activation::identity, InitScheme::fan_in,
                                init_rng);
  agent.critic2 = build_network(sd + ad, config.hidden_sizes, 1, Activation::identity, InitScheme::fan_in,
                                init_rng);
  agent.actor_target = agent.actor;
  agent.critic1_target = agent.critic1;
  agent.critic2_target = agent.critic2;
  agent.actor_opt = AdamState::for_params(agent.actor);
  agent.critic1_opt = AdamState::for_params(agent.critic1);
  agent.critic2_opt = AdamState::for_params(agent.critic2);
  return agent;
}

Matrix policy_actions(const MlpParams& actor, const Matrix& states, double action_bound) {
  return action_bound * numerics::mlp_predict(actor, states);
}

Vector policy_action(const MlpParams& actor, const Vector& state, double action_bound) {
  return policy_actions(actor, Matrix(state.transpose()), action_bound).row(0).transpose();
}

Vector select_action(const MlpParams& actor, const Vector& state, double exploration_sigma, Rng& rng,
                     double action_bound) {
  Vector action = policy_action(actor, state, action_bound);
  for (Eigen::Index j = 0; j < action.size(); ++j) {
    action(j) += rng.normal(0.0, exploration_sigma * action_bound);
  }
  return action.cwiseMax(-action_bound).cwiseMin(action_bound);
}

Matrix critic_input(const Matrix& states, const Matrix& actions) {
  return numerics::concat_cols(states, actions);
}

Vector td_target(const TransitionBatch& batch, const MlpParams& actor_target,
                 std::span<const MlpParams* const> critic_targets, const TargetOptions& options,
                 Rng& rng) {
  if (batch.size() == 0) throw DimensionError("td_target: empty batch");
  if (critic_targets.empty() || (options.twin && critic_targets.size() < 2)) {
    throw ConfigError("td_target: not enough target critics");
  }
  const double bound = options.action_bound;
  Matrix next_actions = policy_actions(actor_target, batch.next_states, bound);
  if (options.twin) {
    const double clip = options.noise_clip * bound;
    const double sigma = options.policy_noise * bound;
    for (Eigen::Index i = 0; i < next_actions.rows(); ++i) {
      for (Eigen::Index j = 0; j < next_actions.cols(); ++j) {
        const double noise = std::clamp(rng.normal(0.0, sigma), -clip, clip);
        next_actions(i, j) = std::clamp(next_actions(i, j) + noise, -bound, bound);
      }
    }
  }
  const Matrix inputs = critic_input(batch.next_states, next_actions);
  Vector q = numerics::mlp_predict(*critic_targets[0], inputs).col(0);
  if (options.twin) q = q.cwiseMin(Vector(numerics::mlp_predict(*critic_targets[1], inputs).col(0)));
  const Vector not_done = Vector::Ones(batch.size()) - batch.terminated;
  return batch.rewards + options.gamma * not_done.cwiseProduct(q);
}

Matrix critic_representation(const MlpParams& critic, const Matrix& states, const Matrix& actions) {
  auto pass = numerics::mlp_forward(critic, critic_input(states, actions));
  return std::move(pass.activations[critic.layers.size() - 1]);
}

LossAndGrads rde_loss_and_grads(const MlpParams& critic, const MlpParams& critic_target,
                                const RdeInputs& inputs) {
  const Matrix& states = *inputs.states;
  const auto batch = static_cast<double>(states.rows());
  const std::size_t encoder_layers = critic.layers.size() - 1;

  auto online = numerics::mlp_forward(critic, critic_input(states, *inputs.policy_actions));
  const Matrix target_rep = critic_representation(critic_target, states, *inputs.runner_up);
  const Matrix& online_rep = online.activations[encoder_layers];

  LossAndGrads out;
  out.value = inputs.alpha * online_rep.cwiseProduct(target_rep).sum() / batch;
  const Matrix rep_grad = (inputs.alpha / batch) * target_rep;
  BackwardOptions opts;
  opts.top = encoder_layers;
  opts.input_grad = false;
  out.grads = numerics::mlp_backward(critic, online, rep_grad, opts).grads;
  return out;
}

double rde_loss(const MlpParams& critic, const MlpParams& critic_target, const Matrix& states,
                const Matrix& policy_actions, const Matrix& runner_up, double alpha) {
  const Matrix online = critic_representation(critic, states, policy_actions);
  const Matrix target = critic_representation(critic_target, states, runner_up);
  return alpha * online.cwiseProduct(target).sum() / static_cast<double>(states.rows());
}

CriticLoss critic_loss_and_grads(const MlpParams& critic, const MlpParams& critic_target,
                                 const Matrix& states, const Matrix& actions, const Vector& targets,
                                 const RdeInputs* rde) {
  const auto batch = static_cast<double>(states.rows());
  auto pass = numerics::mlp_forward(critic, critic_input(states, actions));
  const Vector residual = pass.output().col(0) - targets;

  CriticLoss out;
  out.td_loss = residual.squaredNorm() / batch;
  BackwardOptions opts;
  opts.input_grad = false;
  out.grads = numerics::mlp_backward(critic, pass, Matrix((2.0 / batch) * residual), opts).grads;

  if (rde != nullptr && rde->alpha > 0.0) {
    auto term = rde_loss_and_grads(critic, critic_target, *rde);
    out.rde_value = term.value;
    out.grads += term.grads;
  }
  return out;
}

CriticStats critic_update(AgentState& agent, const TransitionBatch& batch, const RetrospectBatch* retro,
                          const AlgoConfig& config, Rng& smoothing_rng) {
  if (batch.size() == 0) throw DimensionError("critic_update: empty batch");
  const bool twin = config.twin();
  const MlpParams* targets[] = {&agent.critic1_target, &agent.critic2_target};
  const TargetOptions target_opts{config.gamma, config.policy_noise, config.noise_clip,
                                  agent.action_bound, twin};
  const Vector y = td_target(batch, agent.actor_target, std::span(targets, twin ? 2 : 1), target_opts,
                             smoothing_rng);

  RdeInputs rde_inputs;
  const RdeInputs* rde = nullptr;
  if (config.use_rde && retro != nullptr && config.alpha > 0.0) {
    rde_inputs = RdeInputs{&batch.states, &retro->policy_actions, &retro->runner_up, config.alpha};
    rde = &rde_inputs;
  }

  CriticStats stats;
  auto update_one = [&](MlpParams& critic, const MlpParams& target, AdamState& opt) {
    auto loss = critic_loss_and_grads(critic, target, batch.states, batch.actions, y, rde);
    require_finite(loss.td_loss, "critic TD loss");
    require_finite(loss.rde_value, "RDE loss");
    numerics::adam_step(opt, critic, loss.grads, config.critic_lr);
    stats.td_loss += loss.td_loss;
    stats.rde_value += loss.rde_value;
  };
  update_one(agent.critic1, agent.critic1_target, agent.critic1_opt);
  if (twin) update_one(agent.critic2, agent.critic2_target, agent.critic2_opt);
  agent.critic_updates += 1;
  return stats;
}

LossAndGrads actor_loss_and_grads(const MlpParams& actor, const MlpParams& critic, const Matrix& states,
                                  const Matrix* anchors, double mu, double action_bound) {
  const auto batch = static_cast<double>(states.rows());
  auto actor_pass = numerics::mlp_forward(actor, states);
  const Matrix actions = action_bound * actor_pass.output();
  const Eigen::Index action_dim = actions.cols();

  auto critic_pass = numerics::mlp_forward(critic, critic_input(states, actions));
  LossAndGrads out;
  out.value = -critic_pass.output().sum() / batch;

  BackwardOptions critic_opts;
  critic_opts.param_grads = false;
  const Matrix q_grad = Matrix::Constant(states.rows(), 1, -1.0 / batch);
  const Matrix input_grad = numerics::mlp_backward(critic, critic_pass, q_grad, critic_opts).input_grad;
  Matrix action_grad = input_grad.rightCols(action_dim);

  if (anchors != nullptr && mu != 0.0) {
    const Matrix diff = actions - *anchors;
    out.value += mu * diff.squaredNorm() / batch;
    action_grad += (2.0 * mu / batch) * diff;
  }

  BackwardOptions actor_opts;
  actor_opts.input_grad = false;
  out.grads = numerics::mlp_backward(actor, actor_pass, action_bound * action_grad, actor_opts).grads;
  return out;
}

double actor_update(AgentState& agent, const Matrix& states, const Matrix* anchors, double mu,
                    const AlgoConfig& config) {
  if (states.rows() == 0) throw DimensionError("actor_update: empty batch");
  const Matrix* used = config.use_gag ? anchors : nullptr;
  auto loss = actor_loss_and_grads(agent.actor, agent.critic1, states, used, mu, agent.action_bound);
  require_finite(loss.value, "actor loss");
  numerics::adam_step(agent.actor_opt, agent.actor, loss.grads, config.actor_lr);
  agent.actor_updates += 1;
  return loss.value;
}

void soft_update(MlpParams& target, const MlpParams& online, double tau) {
  if (target.layers.size() != online.layers.size()) throw DimensionError("soft_update: layer count mismatch");
  for (std::size_t i = 0; i < target.layers.size(); ++i) {
    auto& t = target.layers[i];
    const auto& o = online.layers[i];
    if (t.weight.rows() != o.weight.rows() || t.weight.cols() != o.weight.cols() ||
        t.bias.size() != o.bias.size()) {
      throw DimensionError("soft_update: shapes differ at layer " + std::to_string(i));
    }
    t.weight = tau * o.weight + (1.0 - tau) * t.weight;
    t.bias = tau * o.bias + (1.0 - tau) * t.bias;
  }
}

Vector nn_full_buffer(const Vector& query, const memory::ActionBuffer& buffer) {
  return memory::knn(query, buffer, 1, memory::Metric::linf).candidates.front().action;
}

std::optional<RetrospectBatch> retrieve(const AgentState& agent, const Matrix& states,
                                        const memory::ActionBuffer& buffer, const AlgoConfig& config) {
  const std::size_t needed = config.nearest_only() ? 1 : 2;
  if (buffer.size() < needed) return std::nullopt;

  RetrospectBatch retro;
  retro.policy_actions = policy_actions(agent.actor, states, agent.action_bound);
  const Eigen::Index rows = states.rows();
  retro.best.resize(rows, agent.action_dim);

  if (config.nearest_only()) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      retro.best.row(i) = nn_full_buffer(retro.policy_actions.row(i).transpose(), buffer).transpose();
    }
    return retro;
  }

  const auto neighbors = memory::knn_batch(retro.policy_actions, buffer, config.k, config.metric);
  const MlpParams* targets[] = {&agent.critic1_target, &agent.critic2_target};
  const auto ranked = memory::rank_batch(states, neighbors, std::span(targets, config.twin() ? 2 : 1));
  retro.runner_up.resize(rows, agent.action_dim);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& r = ranked[static_cast<std::size_t>(i)];
    if (!r) return std::nullopt;
    retro.best.row(i) = r->best.transpose();
    retro.runner_up.row(i) = r->runner_up.transpose();
  }
  return retro;
}

StepStats train_step(AgentState& agent, const memory::ReplayBuffer& replay,
                     const memory::ActionBuffer& actions, std::size_t batch_size, double mu,
                     const AlgoConfig& config, const StepStreams& streams) {
  const TransitionBatch batch = replay.sample(batch_size, *streams.sampling);

  std::optional<RetrospectBatch> retro;
  if (config.uses_retrieval()) retro = retrieve(agent, batch.states, actions, config);

  StepStats stats;
  stats.retrospect_used = retro.has_value();
  const auto critic = critic_update(agent, batch, retro ? &*retro : nullptr, config, *streams.smoothing);
  stats.td_loss = critic.td_loss;
  stats.rde_value = critic.rde_value;

  agent.step_counter += 1;
  if (agent.step_counter % config.d == 0) {
    stats.actor_loss = actor_update(agent, batch.states, retro ? &retro->best : nullptr, mu, config);
    soft_update(agent.critic1_target, agent.critic1, config.tau);
    if (config.twin()) soft_update(agent.critic2_target, agent.critic2, config.tau);
    soft_update(agent.actor_target, agent.actor, config.tau);
  }
  return stats;
}

}  // namespace ira::agents
