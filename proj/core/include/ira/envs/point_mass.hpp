#pragma once

#include "ira/envs/environment.hpp"

namespace ira::envs {

/// Planar point mass driven to a goal. State (x, y, vx, vy, gx, gy) is also the
/// observation. Reward -|p' - g| - 0.01 |a|^2, +1 and termination once within
/// 0.05 of the goal; truncates after 100 steps.
class PointMass final : public Environment {
 public:
  static constexpr double kDt = 0.05;
  static constexpr double kDamping = 0.95;
  static constexpr double kPositionLimit = 2.0;
  static constexpr double kGoalRadius = 0.05;
  static constexpr double kGoalBonus = 1.0;
  static constexpr int kMaxSteps = 100;

  PointMass();

  std::string_view id() const override { return "pointmass"; }
  const EnvSpec& spec() const override { return spec_; }
  Vector reset(Rng& rng) override;
  StepResult step(const Vector& action) override;
  Vector reset_to_observation(const Vector& observation) override;
  std::unique_ptr<Environment> clone() const override;

  const Vector& state() const { return state_; }

 private:
  EnvSpec spec_;
  Vector state_;
};

}  // namespace ira::envs
