#include "ira/harness/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "ira/error.hpp"

namespace ira::harness {

double mu_schedule(std::int64_t t, std::int64_t total_steps, double mu_start, double mu_end, MuShape shape) {
  if (t < 0 || t > total_steps) {
    throw ConfigError("mu_schedule: t=" + std::to_string(t) + " outside [0, " + std::to_string(total_steps) + "]");
  }
  if (t == 0 || mu_start == mu_end) return mu_start;
  if (t == total_steps) return mu_end;
  const double frac = static_cast<double>(t) / static_cast<double>(total_steps);
  double mu = 0.0;
  if (shape == MuShape::linear) {
    mu = mu_start + (mu_end - mu_start) * frac;
  } else {
    if (mu_start <= 0.0 || mu_end <= 0.0) throw ConfigError("exponential mu decay needs positive endpoints");
    mu = mu_start * std::pow(mu_end / mu_start, frac);
  }
  return std::clamp(mu, std::min(mu_start, mu_end), std::max(mu_start, mu_end));
}

}  // namespace ira::harness
