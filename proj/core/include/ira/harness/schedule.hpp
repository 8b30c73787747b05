#pragma once

#include <cstdint>

#include "ira/harness/run_config.hpp"

namespace ira::harness {

/// Decay of the anchor weight from mu_start at t=0 to mu_end at t=total_steps,
/// clamped to the range spanned by the endpoints. Both endpoints are returned
/// exactly. Requires 0 <= t <= total_steps.
double mu_schedule(std::int64_t t, std::int64_t total_steps, double mu_start, double mu_end,
                   MuShape shape = MuShape::linear);

}  // namespace ira::harness
