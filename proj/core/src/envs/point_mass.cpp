#include "ira/envs/point_mass.hpp"

#include <algorithm>
#include <cmath>

#include "ira/error.hpp"

namespace ira::envs {

PointMass::PointMass() : spec_{6, 2, 1.0, kMaxSteps}, state_(Vector::Zero(6)) {}

Vector PointMass::reset(Rng& rng) {
  begin_episode();
  state_.setZero();
  state_(0) = rng.uniform(-1.0, 1.0);
  state_(1) = rng.uniform(-1.0, 1.0);
  state_(4) = rng.uniform(-1.0, 1.0);
  state_(5) = rng.uniform(-1.0, 1.0);
  return state_;
}

Vector PointMass::reset_to_observation(const Vector& observation) {
  if (observation.size() != 6) throw DimensionError("pointmass: observation must have 6 entries");
  begin_episode();
  state_ = observation;
  state_(0) = std::clamp(state_(0), -kPositionLimit, kPositionLimit);
  state_(1) = std::clamp(state_(1), -kPositionLimit, kPositionLimit);
  return state_;
}

StepResult PointMass::step(const Vector& action) {
  begin_step(action);
  const double ax = std::clamp(action(0), -1.0, 1.0);
  const double ay = std::clamp(action(1), -1.0, 1.0);

  const double vx = kDamping * state_(2) + ax * kDt;
  const double vy = kDamping * state_(3) + ay * kDt;
  const double px = std::clamp(state_(0) + vx * kDt, -kPositionLimit, kPositionLimit);
  const double py = std::clamp(state_(1) + vy * kDt, -kPositionLimit, kPositionLimit);
  state_(0) = px;
  state_(1) = py;
  state_(2) = vx;
  state_(3) = vy;

  const double dx = px - state_(4);
  const double dy = py - state_(5);
  const double distance = std::sqrt(dx * dx + dy * dy);

  StepResult result;
  result.reward = -distance - 0.01 * (ax * ax + ay * ay);
  result.terminated = distance < kGoalRadius;
  if (result.terminated) result.reward += kGoalBonus;
  result.next_state = state_;
  finish_step(result);
  return result;
}

std::unique_ptr<Environment> PointMass::clone() const { return std::make_unique<PointMass>(*this); }

}  // namespace ira::envs
