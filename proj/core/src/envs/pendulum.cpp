#include "ira/envs/pendulum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ira/error.hpp"

namespace ira::envs {

double wrap_angle(double theta) {
  double r = std::remainder(theta, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

Pendulum::Pendulum() : spec_{3, 1, kMaxTorque, kMaxSteps} {}

Vector Pendulum::observation() const {
  Vector obs(3);
  obs << std::cos(theta_), std::sin(theta_), theta_dot_;
  return obs;
}

Vector Pendulum::reset(Rng& rng) {
  const double theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
  const double theta_dot = rng.uniform(-1.0, 1.0);
  return reset_to(theta, theta_dot);
}

Vector Pendulum::reset_to(double theta, double theta_dot) {
  begin_episode();
  theta_ = theta;
  theta_dot_ = std::clamp(theta_dot, -kMaxSpeed, kMaxSpeed);
  return observation();
}

Vector Pendulum::reset_to_observation(const Vector& observation) {
  if (observation.size() != 3) throw DimensionError("pendulum: observation must have 3 entries");
  return reset_to(std::atan2(observation(1), observation(0)), observation(2));
}

StepResult Pendulum::step(const Vector& action) {
  begin_step(action);
  const double u = std::clamp(action(0), -kMaxTorque, kMaxTorque);
  const double angle = wrap_angle(theta_);

  StepResult result;
  result.reward = -(angle * angle + 0.1 * theta_dot_ * theta_dot_ + 0.001 * u * u);

  const double accel = 3.0 * kGravity / (2.0 * kLength) * std::sin(theta_) +
                       3.0 / (kMass * kLength * kLength) * u;
  theta_dot_ = std::clamp(theta_dot_ + accel * kDt, -kMaxSpeed, kMaxSpeed);
  theta_ = theta_ + theta_dot_ * kDt;

  result.next_state = observation();
  result.terminated = false;
  finish_step(result);
  return result;
}

std::unique_ptr<Environment> Pendulum::clone() const { return std::make_unique<Pendulum>(*this); }

}  // namespace ira::envs
