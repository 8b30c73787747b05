#include "ira/harness/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ira/error.hpp"

namespace ira::harness {

double interquartile_mean(std::vector<double> values) {
  if (values.empty()) throw ConfigError("interquartile_mean of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t trim = values.size() / 4;
  double sum = 0.0;
  for (std::size_t i = trim; i < values.size() - trim; ++i) sum += values[i];
  return sum / static_cast<double>(values.size() - 2 * trim);
}

double median(std::vector<double> values) {
  if (values.empty()) throw ConfigError("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

AggregateTable aggregate_scores(const ScoreTable& scores) {
  AggregateTable table;
  std::map<std::string, std::vector<double>> pooled;
  for (const auto& [task, by_algo] : scores) {
    if (by_algo.size() < 2) throw ConfigError("task '" + task + "' needs at least two algorithms to normalize");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& [algo, values] : by_algo) {
      if (values.empty()) throw ConfigError("task '" + task + "', algorithm '" + algo + "' has no scores");
      for (double v : values) {
        if (!std::isfinite(v)) throw NonFiniteError("non-finite score for '" + algo + "' on '" + task + "'");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    const bool degenerate = hi == lo;
    if (degenerate) table.degenerate_tasks.push_back(task);
    for (const auto& [algo, values] : by_algo) {
      TaskRow row;
      row.task = task;
      row.algorithm = algo;
      row.degenerate = degenerate;
      double sum = 0.0;
      for (double v : values) sum += v;
      row.raw_mean = sum / static_cast<double>(values.size());
      double sq = 0.0;
      for (double v : values) sq += (v - row.raw_mean) * (v - row.raw_mean);
      row.raw_std = std::sqrt(sq / static_cast<double>(values.size()));
      double norm_sum = 0.0;
      for (double v : values) {
        const double n = degenerate ? 100.0 : 100.0 * ((v - lo) / (hi - lo));
        row.normalized.push_back(n);
        norm_sum += n;
        pooled[algo].push_back(n);
      }
      row.normalized_mean = norm_sum / static_cast<double>(values.size());
      table.rows.push_back(std::move(row));
    }
  }
  for (const auto& [algo, values] : pooled) {
    AlgoSummary s;
    s.algorithm = algo;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    s.iqm = interquartile_mean(values);
    s.median = median(values);
    table.summaries.push_back(s);
  }
  return table;
}

}  // namespace ira::harness
