#include "ira/harness/evaluation.hpp"

#include <cmath>
#include <memory>
#include <vector>

#include "ira/error.hpp"

namespace ira::harness {

namespace {

using EnvPtr = std::unique_ptr<envs::Environment>;

double population_std(const std::vector<double>& xs, double mean) {
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(xs.size()));
}

// Steps every live environment with one batched policy call per step until
// all episodes are over. Returns per-episode discounted returns.
std::vector<double> lockstep_rollout(std::vector<EnvPtr>& envs, std::vector<numerics::Vector> obs,
                                     const BatchPolicy& policy, double gamma, int horizon) {
  const std::size_t n = envs.size();
  std::vector<double> returns(n, 0.0);
  std::vector<double> discount(n, 1.0);
  std::vector<bool> live(n, true);
  std::vector<std::size_t> index;
  const int state_dim = envs.front()->spec().state_dim;
  for (int t = 0; horizon == 0 || t < horizon; ++t) {
    index.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (live[i]) index.push_back(i);
    }
    if (index.empty()) break;
    Matrix states(static_cast<Eigen::Index>(index.size()), state_dim);
    for (std::size_t r = 0; r < index.size(); ++r) states.row(static_cast<Eigen::Index>(r)) = obs[index[r]].transpose();
    const Matrix actions = policy(states);
    for (std::size_t r = 0; r < index.size(); ++r) {
      const std::size_t i = index[r];
      const numerics::Vector action = actions.row(static_cast<Eigen::Index>(r)).transpose();
      const auto result = envs[i]->step(action);
      returns[i] += discount[i] * result.reward;
      discount[i] *= gamma;
      obs[i] = result.next_state;
      if (result.done()) live[i] = false;
    }
  }
  return returns;
}

}  // namespace

EvalResult evaluate(const BatchPolicy& policy, const envs::Environment& prototype, int episodes, Rng& eval_rng) {
  if (episodes < 1) throw ConfigError("evaluate: episodes must be >= 1");
  std::vector<EnvPtr> envs;
  std::vector<numerics::Vector> obs;
  envs.reserve(static_cast<std::size_t>(episodes));
  for (int e = 0; e < episodes; ++e) {
    envs.push_back(prototype.clone());
    obs.push_back(envs.back()->reset(eval_rng));
  }
  const auto returns = lockstep_rollout(envs, std::move(obs), policy, 1.0, 0);
  double sum = 0.0;
  for (double r : returns) sum += r;
  EvalResult out;
  out.mean_return = sum / static_cast<double>(returns.size());
  out.std_return = population_std(returns, out.mean_return);
  return out;
}

EvalResult evaluate(const numerics::MlpParams& actor, double action_bound, std::string_view env_id, int episodes,
                    Rng& eval_rng) {
  const auto env = envs::make_env(env_id);
  const BatchPolicy policy = [&](const Matrix& states) {
    return agents::policy_actions(actor, states, action_bound);
  };
  return evaluate(policy, *env, episodes, eval_rng);
}

EvalResult evaluate_random(std::string_view env_id, int episodes, Rng& eval_rng, Rng& action_rng) {
  const auto env = envs::make_env(env_id);
  const double bound = env->spec().action_bound;
  const int action_dim = env->spec().action_dim;
  const BatchPolicy policy = [&](const Matrix& states) {
    Matrix actions(states.rows(), action_dim);
    for (Eigen::Index r = 0; r < actions.rows(); ++r) {
      for (Eigen::Index c = 0; c < actions.cols(); ++c) actions(r, c) = action_rng.uniform(-bound, bound);
    }
    return actions;
  };
  return evaluate(policy, *env, episodes, eval_rng);
}

ProbeResult overestimation_probe(const agents::AgentState& agent, const envs::Environment& prototype,
                                 const memory::ReplayBuffer& replay, const ProbeOptions& options, Rng& rng) {
  if (options.n_samples == 0) throw ConfigError("overestimation_probe: n_samples must be positive");
  const auto batch = replay.sample(options.n_samples, rng);
  const Matrix actions = agents::policy_actions(agent.actor, batch.states, agent.action_bound);
  const Matrix input = agents::critic_input(batch.states, actions);
  Matrix q = numerics::mlp_predict(agent.critic1, input);
  if (options.twin) q = q.cwiseMin(numerics::mlp_predict(agent.critic2, input));

  std::vector<EnvPtr> envs;
  std::vector<numerics::Vector> obs;
  envs.reserve(options.n_samples);
  for (Eigen::Index i = 0; i < batch.states.rows(); ++i) {
    envs.push_back(prototype.clone());
    obs.push_back(envs.back()->reset_to_observation(batch.states.row(i).transpose()));
  }
  const BatchPolicy policy = [&](const Matrix& states) {
    return agents::policy_actions(agent.actor, states, agent.action_bound);
  };
  const auto returns = lockstep_rollout(envs, std::move(obs), policy, options.gamma, options.horizon);

  ProbeResult out;
  double q_sum = 0.0;
  double r_sum = 0.0;
  for (Eigen::Index i = 0; i < q.rows(); ++i) q_sum += q(i, 0);
  for (double r : returns) r_sum += r;
  out.predicted_q = q_sum / static_cast<double>(q.rows());
  out.true_q = r_sum / static_cast<double>(returns.size());
  return out;
}

ProbeResult overestimation_probe(const agents::AgentState& agent, std::string_view env_id,
                                 const memory::ReplayBuffer& replay, const ProbeOptions& options, Rng& rng) {
  const auto env = envs::make_env(env_id);
  return overestimation_probe(agent, *env, replay, options, rng);
}

}  // namespace ira::harness
