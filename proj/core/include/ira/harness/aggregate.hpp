#pragma once

#include <map>
#include <string>
#include <vector>

namespace ira::harness {

/// task -> algorithm -> per-seed scores.
using ScoreTable = std::map<std::string, std::map<std::string, std::vector<double>>>;

struct TaskRow {
  std::string task;
  std::string algorithm;
  double raw_mean = 0.0;
  double raw_std = 0.0;  // population std across seeds
  std::vector<double> normalized;  // per seed, in input order
  double normalized_mean = 0.0;
  bool degenerate = false;  // every score on the task was identical
};

struct AlgoSummary {
  std::string algorithm;
  double mean = 0.0;
  double iqm = 0.0;
  double median = 0.0;
};

struct AggregateTable {
  std::vector<TaskRow> rows;            // ordered by task, then algorithm
  std::vector<AlgoSummary> summaries;   // ordered by algorithm
  std::vector<std::string> degenerate_tasks;
};

/// Mean of the values left after trimming floor(n/4) from each end of the
/// sorted sample.
double interquartile_mean(std::vector<double> values);
double median(std::vector<double> values);

/// Per-task 100-scaled min-max normalization over every per-seed score of
/// every algorithm on that task, followed by Mean, IQM and Median of each
/// algorithm's pooled normalized scores. A task whose scores are all equal is
/// normalized to 100 and flagged. Throws ConfigError when a task has fewer
/// than two algorithms or an algorithm has no scores.
AggregateTable aggregate_scores(const ScoreTable& scores);

}  // namespace ira::harness
