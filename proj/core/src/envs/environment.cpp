#include "ira/envs/environment.hpp"

#include <cmath>

#include "ira/envs/pendulum.hpp"
#include "ira/envs/point_mass.hpp"
#include "ira/error.hpp"

namespace ira::envs {

Vector Environment::reset_to_observation(const Vector&) {
  throw Error("environment '" + std::string(id()) + "' cannot be reset to a given state");
}

void Environment::begin_step(const Vector& action) const {
  if (over_) throw EpisodeError(std::string(id()) + ": step called on a finished episode");
  if (action.size() != spec().action_dim) {
    throw EpisodeError(std::string(id()) + ": action has " + std::to_string(action.size()) +
                       " entries, expected " + std::to_string(spec().action_dim));
  }
  if (action.array().isNaN().any()) throw EpisodeError(std::string(id()) + ": NaN action");
}

void Environment::finish_step(StepResult& result) {
  elapsed_ += 1;
  result.truncated = elapsed_ == spec().max_episode_steps;
  over_ = result.terminated || result.truncated;
}

std::unique_ptr<Environment> make_env(std::string_view id) {
  if (id == "pendulum") return std::make_unique<Pendulum>();
  if (id == "pointmass") return std::make_unique<PointMass>();
  throw ConfigError("unknown environment id '" + std::string(id) + "'");
}

std::vector<std::string> env_ids() { return {"pendulum", "pointmass"}; }

}  // namespace ira::envs
