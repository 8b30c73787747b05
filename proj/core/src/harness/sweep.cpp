#include "ira/harness/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "ira/error.hpp"
#include "ira/harness/train.hpp"

namespace ira::harness {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> expand(const std::string& value) {
  if (value.size() < 2 || value.front() != '[' || value.back() != ']') return {value};
  std::vector<std::string> items;
  std::string body = value.substr(1, value.size() - 2);
  std::size_t start = 0;
  while (start <= body.size()) {
    const auto comma = body.find(',', start);
    const auto end = comma == std::string::npos ? body.size() : comma;
    const auto item = trim(body.substr(start, end - start));
    if (!item.empty()) items.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (items.empty()) throw ConfigError("empty list value '" + value + "'");
  return items;
}

std::string sanitize(std::string s) {
  for (char& ch : s) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '.' && ch != '-') ch = '_';
  }
  return s;
}

}  // namespace

SweepPlan plan_sweep(const std::vector<Setting>& settings) {
  SweepPlan plan;
  std::filesystem::path root = "runs";
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  for (const auto& [key, value] : settings) {
    if (key == "out") {
      root = value;
    } else if (key == "jobs") {
      plan.jobs = std::max(1, std::stoi(value));
    } else {
      auto it = std::find_if(axes.begin(), axes.end(), [&](const auto& a) { return a.first == key; });
      if (it == axes.end()) {
        axes.emplace_back(key, expand(value));
      } else {
        it->second = expand(value);
      }
    }
  }

  std::vector<std::size_t> index(axes.size(), 0);
  std::set<std::string> names;
  while (true) {
    std::vector<Setting> chosen;
    std::string suffix;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const auto& [key, values] = axes[a];
      chosen.emplace_back(key, values[index[a]]);
      if (values.size() > 1 && key != "seed" && key != "env" && key != "algo" && key != "label") {
        suffix += "_" + sanitize(key) + "-" + sanitize(values[index[a]]);
      }
    }
    RunConfig config = resolve_config(chosen);
    std::string name = sanitize(config.resolved_label()) + "_" + sanitize(config.env_id) + "_s" +
                       std::to_string(config.seed) + suffix;
    if (!names.insert(name).second) throw ConfigError("sweep produces duplicate run directory '" + name + "'");
    config.output_dir = root / name;
    config.validate();
    plan.runs.push_back({config, config.output_dir});

    std::size_t a = 0;
    for (; a < axes.size(); ++a) {
      if (++index[a] < axes[a].second.size()) break;
      index[a] = 0;
    }
    if (a == axes.size()) break;
  }
  return plan;
}

std::vector<SweepOutcome> run_sweep(const SweepPlan& plan) {
  std::vector<SweepOutcome> outcomes(plan.runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < plan.runs.size(); i = next++) {
      const auto& run = plan.runs[i];
      auto& outcome = outcomes[i];
      outcome.output_dir = run.output_dir;
      try {
        write_outputs(train(run.config), run.output_dir);
        outcome.ok = true;
      } catch (const std::exception& e) {
        outcome.error = e.what();
      }
    }
  };
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(plan.jobs), plan.runs.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return outcomes;
}

}  // namespace ira::harness
