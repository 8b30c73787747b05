#pragma once

#include "ira/envs/environment.hpp"

namespace ira::envs {

/// Torque-limited pendulum swing-up. Internal state (theta, theta_dot),
/// observation (cos theta, sin theta, theta_dot), reward
/// -(wrap(theta)^2 + 0.1 theta_dot^2 + 0.001 u^2) on the pre-step state.
/// Never terminates; truncates after 200 steps.
class Pendulum final : public Environment {
 public:
  static constexpr double kGravity = 10.0;
  static constexpr double kMass = 1.0;
  static constexpr double kLength = 1.0;
  static constexpr double kDt = 0.05;
  static constexpr double kMaxTorque = 2.0;
  static constexpr double kMaxSpeed = 8.0;
  static constexpr int kMaxSteps = 200;

  Pendulum();

  std::string_view id() const override { return "pendulum"; }
  const EnvSpec& spec() const override { return spec_; }
  Vector reset(Rng& rng) override;
  StepResult step(const Vector& action) override;
  Vector reset_to_observation(const Vector& observation) override;
  std::unique_ptr<Environment> clone() const override;

  /// Starts an episode from an explicit (theta, theta_dot).
  Vector reset_to(double theta, double theta_dot);

  double theta() const { return theta_; }
  double theta_dot() const { return theta_dot_; }
  Vector observation() const;

 private:
  EnvSpec spec_;
  double theta_ = 0.0;
  double theta_dot_ = 0.0;
};

/// Maps an angle to (-pi, pi].
double wrap_angle(double theta);

}  // namespace ira::envs
