#include "ira/harness/train.hpp"

#include <string>

#include "ira/agents/agent.hpp"
#include "ira/agents/checkpoint.hpp"
#include "ira/envs/environment.hpp"
#include "ira/error.hpp"
#include "ira/harness/evaluation.hpp"
#include "ira/harness/schedule.hpp"
#include "ira/memory/action_buffer.hpp"
#include "ira/memory/replay_buffer.hpp"

#ifndef IRA_VERSION
#define IRA_VERSION "unknown"
#endif

namespace ira::harness {

namespace {

using numerics::Rng;
using numerics::Vector;

Vector uniform_action(int dim, double bound, Rng& rng) {
  Vector a(dim);
  for (int i = 0; i < dim; ++i) a(i) = rng.uniform(-bound, bound);
  return a;
}

}  // namespace

RunLog train(const RunConfig& config, const TrainHooks& hooks) {
  config.validate();
  const auto& algo = config.algo;

  auto env = envs::make_env(config.env_id);
  const auto spec = env->spec();

  Rng init_rng = Rng::stream(config.seed, "init");
  Rng env_rng = Rng::stream(config.seed, "env");
  Rng exploration_rng = Rng::stream(config.seed, "exploration");
  Rng sampling_rng = Rng::stream(config.seed, "sampling");
  Rng smoothing_rng = Rng::stream(config.seed, "smoothing");
  Rng probe_rng = Rng::stream(config.seed, "probe");

  auto agent = agents::make_agent(spec.state_dim, spec.action_dim, spec.action_bound, algo, init_rng);
  memory::ReplayBuffer replay(config.replay_capacity, spec.state_dim, spec.action_dim);
  memory::ActionBuffer action_buffer(config.action_buffer_capacity, spec.action_dim);
  const agents::StepStreams streams{&sampling_rng, &smoothing_rng};

  ProbeOptions probe_options;
  probe_options.gamma = algo.gamma;
  probe_options.n_samples = config.probe_samples;
  probe_options.horizon = config.probe_horizon;
  probe_options.twin = algo.twin();

  RunLog log;
  std::int64_t retrospect_steps = 0;
  std::int64_t episodes = 0;
  double last_actor_loss = 0.0;

  Vector state = env->reset(env_rng);
  for (std::int64_t t = 1; t <= config.total_steps; ++t) {
    const Vector action =
        t <= config.warmup_steps
            ? uniform_action(spec.action_dim, spec.action_bound, exploration_rng)
            : agents::select_action(agent.actor, state, algo.exploration_sigma, exploration_rng, spec.action_bound);
    const auto result = env->step(action);
    replay.push({state, action, result.reward, result.next_state, result.terminated, result.truncated});
    action_buffer.push(action);
    if (result.done()) {
      ++episodes;
      state = env->reset(env_rng);
    } else {
      state = result.next_state;
    }

    if (t > config.warmup_steps) {
      const double scheduled = mu_schedule(t, config.total_steps, algo.mu_start, algo.mu_end, config.mu_shape);
      const double mu = algo.use_gag ? scheduled : 0.0;
      agents::StepStats stats;
      try {
        stats = agents::train_step(agent, replay, action_buffer, config.batch_size, mu, algo, streams);
      } catch (const NonFiniteError& e) {
        std::string what = e.what();
        if (!config.output_dir.empty()) {
          const auto dir = config.output_dir / "abort_checkpoint";
          agents::save_checkpoint(agent, dir);
          what += " (checkpoint written to " + dir.string() + ")";
        }
        throw TrainingAborted(t, what);
      }
      if (stats.retrospect_used) ++retrospect_steps;
      if (stats.actor_loss) last_actor_loss = *stats.actor_loss;
      if (t % config.log_interval == 0) {
        log.loss_trace.push_back({t, stats.td_loss, stats.rde_value, last_actor_loss, mu});
      }
    }

    if (t % config.eval_interval == 0) {
      Rng eval_rng = Rng::stream(config.seed, "evaluation");
      const auto eval = evaluate(agent.actor, spec.action_bound, config.env_id, config.eval_episodes, eval_rng);
      log.eval_points.push_back({t, eval.mean_return, eval.std_return});
      const auto probe = overestimation_probe(agent, *env, replay, probe_options, probe_rng);
      log.bias_trace.push_back({t, probe.predicted_q, probe.true_q});
      if (hooks.on_eval) hooks.on_eval(log.eval_points.back());
    }
  }

  auto& m = log.manifest;
  m["format_version"] = kOutputFormatVersion;
  m["code_version"] = IRA_VERSION;
  m["seed"] = config.seed;
  m["config"] = config.to_json();
  m["counters"] = {
      {"env_steps", config.total_steps},
      {"episodes", episodes},
      {"learner_steps", agent.step_counter},
      {"critic_updates", agent.critic_updates},
      {"actor_updates", agent.actor_updates},
      {"retrospect_steps", retrospect_steps},
      {"action_buffer_size", action_buffer.size()},
      {"replay_size", replay.size()},
  };
  m["rng_streams"] = {"init", "env", "exploration", "sampling", "smoothing", "evaluation", "probe"};
  m["score_protocol"] =
      "per-seed score is the mean of the last 10 evaluation means; seeds are then combined as mean and "
      "population std";
  return log;
}

}  // namespace ira::harness
