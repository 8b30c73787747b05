#pragma once

#include <functional>

#include "ira/harness/run_config.hpp"
#include "ira/harness/run_log.hpp"

namespace ira::harness {

struct TrainHooks {
  /// Called after each evaluation with the point just recorded.
  std::function<void(const EvalPoint&)> on_eval;
};

/// Runs exactly config.total_steps environment steps: uniform random actions
/// during warmup, then noisy policy actions with one learner step per
/// environment step. Evaluation and the bias probe run every eval_interval
/// steps. A non-finite loss throws TrainingAborted carrying the step; when
/// output_dir is set the agent is checkpointed to output_dir/abort_checkpoint
/// first. The result depends only on the config.
RunLog train(const RunConfig& config, const TrainHooks& hooks = {});

}  // namespace ira::harness
