#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

namespace ira::harness {

struct EvalPoint {
  std::int64_t step = 0;
  double mean_return = 0.0;
  double std_return = 0.0;
};

struct LossPoint {
  std::int64_t step = 0;
  double td_loss = 0.0;
  double rde_value = 0.0;
  double actor_loss = 0.0;  // most recent actor loss, 0 before the first actor update
  double mu = 0.0;          // weight actually applied; 0 when the anchor term is off
};

struct BiasPoint {
  std::int64_t step = 0;
  double predicted_q = 0.0;
  double true_q = 0.0;
};

struct RunLog {
  std::vector<EvalPoint> eval_points;
  std::vector<LossPoint> loss_trace;
  std::vector<BiasPoint> bias_trace;
  nlohmann::json manifest = nlohmann::json::object();
};

inline constexpr int kOutputFormatVersion = 1;

/// Writes eval.csv, losses.csv, bias.csv and manifest.json into `dir`
/// (created if missing). Floats are printed with 17 significant digits.
/// Throws IoError with the failing path.
void write_outputs(const RunLog& log, const std::filesystem::path& dir);

std::vector<EvalPoint> read_eval_csv(const std::filesystem::path& path);
std::vector<LossPoint> read_losses_csv(const std::filesystem::path& path);
std::vector<BiasPoint> read_bias_csv(const std::filesystem::path& path);
nlohmann::json read_manifest(const std::filesystem::path& path);

/// Mean of the last `count` evaluation means (all of them when fewer exist).
/// Throws ConfigError on an empty list.
double final_score(const std::vector<EvalPoint>& points, std::size_t count);

}  // namespace ira::harness
