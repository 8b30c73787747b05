#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ira/harness/run_config.hpp"

namespace ira::harness {

struct SweepRun {
  RunConfig config;
  std::filesystem::path output_dir;
};

struct SweepPlan {
  std::vector<SweepRun> runs;
  int jobs = 1;
};

/// Expands sweep settings into a grid. A value written as `[a, b, c]` is a
/// list; the cartesian product of all lists gives one run per combination.
/// `out` names the root directory (default "runs") and `jobs` the number of
/// runs executed concurrently. Each run writes to its own subdirectory named
/// after its label, environment, seed and any other swept values.
SweepPlan plan_sweep(const std::vector<Setting>& settings);

struct SweepOutcome {
  std::filesystem::path output_dir;
  bool ok = false;
  std::string error;
};

/// Runs every planned configuration (train + write_outputs) on `plan.jobs`
/// worker threads. Failures are recorded per run, never propagated.
std::vector<SweepOutcome> run_sweep(const SweepPlan& plan);

}  // namespace ira::harness
