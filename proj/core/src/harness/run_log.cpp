#include "ira/harness/run_log.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>

#include <fmt/format.h>

#include "ira/error.hpp"

namespace ira::harness {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing: " + std::strerror(errno));
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed: " + std::strerror(errno));
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path, std::string_view expected_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != expected_header) {
    throw IoError("'" + path.string() + "': expected header '" + std::string(expected_header) + "'");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

double parse_double(const std::string& s, const fs::path& path) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw IoError("'" + path.string() + "': bad number '" + s + "'");
  return v;
}

std::int64_t parse_step(const std::string& s, const fs::path& path) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw IoError("'" + path.string() + "': bad step '" + s + "'");
  return v;
}

void expect_fields(const std::vector<std::string>& row, std::size_t n, const fs::path& path) {
  if (row.size() != n) throw IoError("'" + path.string() + "': expected " + std::to_string(n) + " fields per row");
}

constexpr std::string_view kEvalHeader = "step,mean_return,std_return";
constexpr std::string_view kLossHeader = "step,td_loss,rde_value,actor_loss,mu";
constexpr std::string_view kBiasHeader = "step,predicted_q,true_q";

}  // namespace

void write_outputs(const RunLog& log, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  {
    const auto path = dir / "eval.csv";
    auto out = open_out(path);
    out << kEvalHeader << '\n';
    for (const auto& p : log.eval_points) out << fmt::format("{},{:.17g},{:.17g}\n", p.step, p.mean_return, p.std_return);
    finish(out, path);
  }
  {
    const auto path = dir / "losses.csv";
    auto out = open_out(path);
    out << kLossHeader << '\n';
    for (const auto& p : log.loss_trace) {
      out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g}\n", p.step, p.td_loss, p.rde_value, p.actor_loss, p.mu);
    }
    finish(out, path);
  }
  {
    const auto path = dir / "bias.csv";
    auto out = open_out(path);
    out << kBiasHeader << '\n';
    for (const auto& p : log.bias_trace) out << fmt::format("{},{:.17g},{:.17g}\n", p.step, p.predicted_q, p.true_q);
    finish(out, path);
  }
  {
    const auto path = dir / "manifest.json";
    auto out = open_out(path);
    out << log.manifest.dump(2) << '\n';
    finish(out, path);
  }
}

std::vector<EvalPoint> read_eval_csv(const fs::path& path) {
  std::vector<EvalPoint> out;
  for (const auto& row : read_csv(path, kEvalHeader)) {
    expect_fields(row, 3, path);
    out.push_back({parse_step(row[0], path), parse_double(row[1], path), parse_double(row[2], path)});
  }
  return out;
}

std::vector<LossPoint> read_losses_csv(const fs::path& path) {
  std::vector<LossPoint> out;
  for (const auto& row : read_csv(path, kLossHeader)) {
    expect_fields(row, 5, path);
    out.push_back({parse_step(row[0], path), parse_double(row[1], path), parse_double(row[2], path),
                   parse_double(row[3], path), parse_double(row[4], path)});
  }
  return out;
}

std::vector<BiasPoint> read_bias_csv(const fs::path& path) {
  std::vector<BiasPoint> out;
  for (const auto& row : read_csv(path, kBiasHeader)) {
    expect_fields(row, 3, path);
    out.push_back({parse_step(row[0], path), parse_double(row[1], path), parse_double(row[2], path)});
  }
  return out;
}

nlohmann::json read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("'" + path.string() + "': " + e.what());
  }
}

double final_score(const std::vector<EvalPoint>& points, std::size_t count) {
  if (points.empty()) throw ConfigError("final_score: no evaluation points");
  if (count == 0) throw ConfigError("final_score: count must be positive");
  const std::size_t n = std::min(count, points.size());
  double sum = 0.0;
  for (std::size_t i = points.size() - n; i < points.size(); ++i) sum += points[i].mean_return;
  return sum / static_cast<double>(n);
}

}  // namespace ira::harness
