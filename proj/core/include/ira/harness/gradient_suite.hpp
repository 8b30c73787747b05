#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ira::harness {

struct GradCase {
  int index = 0;
  std::string kind;  // mlp-params, mlp-input, critic-td, critic-td-rde, actor-gag
  std::size_t parameter_count = 0;
  int redraws = 0;  // draws rejected for sitting within reach of a relu kink
  double max_relative_error = 0.0;
};

struct GradSuiteResult {
  std::vector<GradCase> cases;
  double max_relative_error = 0.0;

  bool passed(double tolerance = 1e-4) const { return max_relative_error < tolerance; }
};

/// Checks analytic gradients against central differences on `cases` random
/// configurations cycling through plain MLP regressions (parameters and
/// input), the critic TD loss with and without the representation term, and
/// the anchored actor objective. Draws whose relu pre-activations come within
/// 1e-3 of zero are replaced, since central differences are undefined there.
GradSuiteResult run_gradient_suite(std::uint64_t seed = 0, int cases = 50, std::size_t probes = 40,
                                   double h = 1e-5);

}  // namespace ira::harness
