#include "ira/numerics/adam.hpp"

#include <cmath>
#include <string>

#include "ira/error.hpp"

namespace ira::numerics {

AdamState AdamState::for_params(const MlpParams& params, AdamConfig config) {
  return AdamState{MlpGrads::zeros_like(params), MlpGrads::zeros_like(params), 0, config};
}

void adam_step(AdamState& state, MlpParams& params, const MlpGrads& grads, double learning_rate) {
  const std::size_t n = params.layers.size();
  if (grads.layers.size() != n || state.m.layers.size() != n || state.v.layers.size() != n) {
    throw DimensionError("adam_step: layer count mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = params.layers[i];
    const auto& g = grads.layers[i];
    if (g.weight.rows() != p.weight.rows() || g.weight.cols() != p.weight.cols() ||
        g.bias.size() != p.bias.size() || state.m.layers[i].weight.size() != p.weight.size() ||
        state.v.layers[i].weight.size() != p.weight.size()) {
      throw DimensionError("adam_step: shapes differ at layer " + std::to_string(i));
    }
  }
  if (!grads.all_finite()) throw NonFiniteError("adam_step: non-finite gradient");

  const auto& cfg = state.config;
  state.step_count += 1;
  const double t = static_cast<double>(state.step_count);
  const double correction1 = 1.0 - std::pow(cfg.beta1, t);
  const double correction2 = 1.0 - std::pow(cfg.beta2, t);

  auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
    m.array() = cfg.beta1 * m.array() + (1.0 - cfg.beta1) * g.array();
    v.array() = cfg.beta2 * v.array() + (1.0 - cfg.beta2) * g.array().square();
    param.array() -= learning_rate * (m.array() / correction1) /
                     ((v.array() / correction2).sqrt() + cfg.epsilon);
  };
  for (std::size_t i = 0; i < n; ++i) {
    update(params.layers[i].weight, state.m.layers[i].weight, state.v.layers[i].weight,
           grads.layers[i].weight);
    update(params.layers[i].bias, state.m.layers[i].bias, state.v.layers[i].bias,
           grads.layers[i].bias);
  }
}

}  // namespace ira::numerics
