#pragma once

#include <functional>
#include <span>

#include "ira/numerics/rng.hpp"

namespace ira::numerics {

using ScalarFunction = std::function<double(std::span<const double>)>;

/// Compares `analytic_grad` against central differences of `f` at `params` on
/// `probe_count` coordinates drawn without replacement (all coordinates when
/// probe_count >= params.size()). Returns the largest
/// |analytic - numeric| / max(1e-8, |numeric|). Never throws on a mismatch.
double finite_diff_check(const ScalarFunction& f, std::span<const double> params,
                         std::span<const double> analytic_grad, std::size_t probe_count, double h,
                         Rng& rng);

}  // namespace ira::numerics
