#pragma once

#include <cstdint>

#include "ira/numerics/mlp.hpp"

namespace ira::numerics {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  MlpGrads m;
  MlpGrads v;
  std::int64_t step_count = 0;
  AdamConfig config;

  static AdamState for_params(const MlpParams& params, AdamConfig config = {});
};

/// One bias-corrected Adam step. Throws NonFiniteError (leaving params and
/// state untouched) if any gradient entry is NaN or infinite.
void adam_step(AdamState& state, MlpParams& params, const MlpGrads& grads, double learning_rate);

}  // namespace ira::numerics
