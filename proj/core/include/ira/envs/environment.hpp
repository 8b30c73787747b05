#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ira/numerics/rng.hpp"
#include "ira/numerics/tensor.hpp"

namespace ira::envs {

using numerics::Rng;
using numerics::Vector;

struct EnvSpec {
  int state_dim = 0;
  int action_dim = 0;
  /// Symmetric box [-action_bound, action_bound] on every action coordinate.
  double action_bound = 1.0;
  int max_episode_steps = 1;
};

struct StepResult {
  Vector next_state;
  double reward = 0.0;
  bool terminated = false;  // reached a true terminal state
  bool truncated = false;   // hit the time limit

  bool done() const { return terminated || truncated; }
};

/// Single-owner episodic environment.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string_view id() const = 0;
  virtual const EnvSpec& spec() const = 0;

  /// Starts a new episode and returns its first observation.
  virtual Vector reset(Rng& rng) = 0;

  /// Advances one step. Throws EpisodeError if the episode already ended, the
  /// action has the wrong size, or it contains NaN.
  virtual StepResult step(const Vector& action) = 0;

  /// Starts a fresh episode (step counter zeroed) from the internal state that
  /// produced `observation`. Environments that cannot do this throw.
  virtual Vector reset_to_observation(const Vector& observation);

  virtual std::unique_ptr<Environment> clone() const = 0;

  int elapsed_steps() const { return elapsed_; }
  bool episode_over() const { return over_; }

 protected:
  /// Shared bookkeeping for subclasses: validates the action and the episode.
  void begin_step(const Vector& action) const;
  /// Increments the counter and fills in `truncated`; marks the episode over.
  void finish_step(StepResult& result);
  void begin_episode() {
    elapsed_ = 0;
    over_ = false;
  }

 private:
  int elapsed_ = 0;
  bool over_ = true;
};

/// Ids accepted by make_env: "pendulum", "pointmass".
std::unique_ptr<Environment> make_env(std::string_view id);
std::vector<std::string> env_ids();

}  // namespace ira::envs
