#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ira/error.hpp"
#include "ira/harness/aggregate.hpp"
#include "ira/harness/gradient_suite.hpp"
#include "ira/harness/run_config.hpp"
#include "ira/harness/run_log.hpp"
#include "ira/harness/runtime.hpp"
#include "ira/harness/sweep.hpp"
#include "ira/harness/train.hpp"

namespace fs = std::filesystem;
using namespace ira::harness;

namespace {

struct ValueFlag {
  const char* key;
  const char* help;
  std::string value;
  CLI::Option* option = nullptr;
};

struct BoolFlag {
  const char* key;
  const char* help;
  CLI::Option* option = nullptr;
};

int run_train(const std::string& config_file, std::vector<ValueFlag>& values, std::vector<BoolFlag>& flags,
              bool quiet) {
  std::vector<Setting> settings;
  if (!config_file.empty()) settings = read_settings_file(config_file);
  for (const auto& v : values) {
    if (v.option->count() > 0) settings.emplace_back(v.key, v.value);
  }
  for (const auto& f : flags) {
    if (f.option->count() > 0) settings.emplace_back(f.key, "true");
  }
  RunConfig config = resolve_config(settings);
  if (config.output_dir.empty()) {
    config.output_dir = fs::path("runs") / fmt::format("{}_{}_s{}", config.resolved_label(), config.env_id, config.seed);
  }
  TrainHooks hooks;
  if (!quiet) {
    hooks.on_eval = [&](const EvalPoint& p) {
      std::cerr << fmt::format("[{} {} seed {}] step {:>8}  return {:>10.2f} +- {:.2f}\n", config.resolved_label(),
                               config.env_id, config.seed, p.step, p.mean_return, p.std_return);
    };
  }
  const RunLog log = train(config, hooks);
  write_outputs(log, config.output_dir);
  std::cout << config.output_dir.string() << '\n';
  return 0;
}

int run_sweep_cmd(const std::string& config_file) {
  const auto plan = plan_sweep(read_settings_file(config_file));
  std::cerr << fmt::format("sweep: {} runs on {} worker(s)\n", plan.runs.size(), plan.jobs);
  const auto outcomes = run_sweep(plan);
  int failures = 0;
  for (const auto& o : outcomes) {
    if (o.ok) {
      std::cout << "ok     " << o.output_dir.string() << '\n';
    } else {
      ++failures;
      std::cout << "FAILED " << o.output_dir.string() << ": " << o.error << '\n';
    }
  }
  return failures == 0 ? 0 : 1;
}

void collect_runs(const fs::path& path, std::vector<fs::path>& out) {
  if (fs::exists(path / "manifest.json")) {
    out.push_back(path);
    return;
  }
  if (!fs::is_directory(path)) throw ira::IoError("'" + path.string() + "' is not a run directory");
  std::vector<fs::path> children;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_directory()) children.push_back(entry.path());
  }
  std::sort(children.begin(), children.end());
  for (const auto& c : children) {
    if (fs::exists(c / "manifest.json")) out.push_back(c);
  }
}

int run_aggregate(const std::vector<std::string>& inputs, const std::string& out_path, std::size_t last) {
  std::vector<fs::path> runs;
  for (const auto& in : inputs) collect_runs(in, runs);
  if (runs.empty()) throw ira::IoError("no run directories found under the given inputs");
  ScoreTable scores;
  for (const auto& dir : runs) {
    const auto manifest = read_manifest(dir / "manifest.json");
    const auto& cfg = manifest.at("config");
    const auto task = cfg.at("env").get<std::string>();
    const auto label = cfg.at("label").get<std::string>();
    scores[task][label].push_back(final_score(read_eval_csv(dir / "eval.csv"), last));
  }
  const auto table = aggregate_scores(scores);

  std::string text;
  text += fmt::format("# per-seed score: mean of the last {} evaluations\n", last);
  text += "task,algorithm,seeds,raw_mean,raw_std,normalized_mean,degenerate\n";
  for (const auto& row : table.rows) {
    text += fmt::format("{},{},{},{:.17g},{:.17g},{:.17g},{}\n", row.task, row.algorithm, row.normalized.size(),
                        row.raw_mean, row.raw_std, row.normalized_mean, row.degenerate ? 1 : 0);
  }
  text += "\nalgorithm,mean,iqm,median\n";
  for (const auto& s : table.summaries) {
    text += fmt::format("{},{:.17g},{:.17g},{:.17g}\n", s.algorithm, s.mean, s.iqm, s.median);
  }
  for (const auto& task : table.degenerate_tasks) {
    std::cerr << "warning: every score on task '" << task << "' is identical; normalized to 100\n";
  }
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    std::FILE* f = std::fopen(out_path.c_str(), "wb");
    if (f == nullptr) throw ira::IoError("cannot open '" + out_path + "' for writing");
    const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
    if (std::fclose(f) != 0 || !ok) throw ira::IoError("write to '" + out_path + "' failed");
  }
  return 0;
}

int run_probe_grad(std::uint64_t seed, int cases, bool verbose) {
  const auto result = run_gradient_suite(seed, cases);
  for (const auto& c : result.cases) {
    if (verbose || c.max_relative_error >= 1e-4) {
      std::cout << fmt::format("case {:>3}  {:<14} params {:>5}  redraws {}  max rel err {:.3e}\n", c.index, c.kind,
                               c.parameter_count, c.redraws, c.max_relative_error);
    }
  }
  std::cout << fmt::format("{} cases, max relative error {:.3e}: {}\n", result.cases.size(),
                           result.max_relative_error, result.passed() ? "ok" : "FAILED");
  return result.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  configure_allocator();
  CLI::App app{"Instant Retrospect Action: train, sweep, aggregate and verify"};
  app.require_subcommand(1);

  auto* train_cmd = app.add_subcommand("train", "Train one agent and write eval/loss/bias CSVs and a manifest");
  std::string config_file;
  bool quiet = false;
  train_cmd->add_option("--config", config_file, "Key-value settings file; flags given here override it");
  train_cmd->add_flag("--quiet", quiet, "Do not print evaluation progress");
  std::vector<ValueFlag> values{
      {"env", "Environment id: pendulum | pointmass", {}},
      {"algo", "ddpg | td3 | ira | ira-ddpg | nntd3", {}},
      {"seed", "Random seed", {}},
      {"steps", "Total environment steps", {}},
      {"alpha", "Weight of the representation term", {}},
      {"k", "Neighbors retrieved per state", {}},
      {"mu-start", "Initial anchor weight", {}},
      {"mu-end", "Final anchor weight", {}},
      {"mu-shape", "linear | exponential", {}},
      {"d", "Actor update delay", {}},
      {"metric", "l1 | l2 | linf", {}},
      {"action-buffer", "Action buffer capacity", {}},
      {"eval-interval", "Steps between evaluations", {}},
      {"eval-episodes", "Episodes per evaluation", {}},
      {"out", "Output directory", {}},
      {"label", "Name used by aggregate (defaults to the algorithm)", {}},
      {"batch-size", "Minibatch size", {}},
      {"replay-capacity", "Replay buffer capacity", {}},
      {"warmup", "Uniform-random steps before learning", {}},
      {"gamma", "Discount", {}},
      {"tau", "Target update rate", {}},
      {"policy-noise", "Target smoothing noise, in action-bound units", {}},
      {"noise-clip", "Target smoothing clip, in action-bound units", {}},
      {"exploration-sigma", "Exploration noise, in action-bound units", {}},
      {"actor-lr", "Actor learning rate", {}},
      {"critic-lr", "Critic learning rate", {}},
      {"hidden", "Hidden widths, comma separated", {}},
      {"probe-samples", "States per bias probe", {}},
      {"probe-horizon", "Rollout length per probe state (0: to episode end)", {}},
      {"log-interval", "Steps between loss log rows", {}},
  };
  for (auto& v : values) v.option = train_cmd->add_option(std::string("--") + v.key, v.value, v.help);
  std::vector<BoolFlag> flags{{"no-rde", "Disable the representation term"},
                              {"no-gag", "Disable the anchored actor term"}};
  for (auto& f : flags) f.option = train_cmd->add_flag(std::string("--") + f.key)->description(f.help);

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a grid of training runs described by a settings file");
  std::string sweep_file;
  sweep_cmd->add_option("--config", sweep_file, "Settings file; [a, b] values form grid axes")->required();

  auto* agg_cmd = app.add_subcommand("aggregate", "Normalize final scores across algorithms and tasks");
  std::vector<std::string> inputs;
  std::string agg_out;
  std::size_t last = 10;
  agg_cmd->add_option("--inputs", inputs, "Run directories or directories containing runs")->required();
  agg_cmd->add_option("--out", agg_out, "Output CSV (stdout when omitted)");
  agg_cmd->add_option("--last", last, "Evaluations averaged per run")->check(CLI::PositiveNumber);

  auto* grad_cmd = app.add_subcommand("probe-grad", "Check analytic gradients against finite differences");
  std::uint64_t grad_seed = 0;
  int grad_cases = 50;
  bool grad_verbose = false;
  grad_cmd->add_option("--seed", grad_seed, "Suite seed");
  grad_cmd->add_option("--cases", grad_cases, "Number of random configurations")->check(CLI::PositiveNumber);
  grad_cmd->add_flag("--verbose", grad_verbose, "Print every case");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) return run_train(config_file, values, flags, quiet);
    if (*sweep_cmd) return run_sweep_cmd(sweep_file);
    if (*agg_cmd) return run_aggregate(inputs, agg_out, last);
    if (*grad_cmd) return run_probe_grad(grad_seed, grad_cases, grad_verbose);
  } catch (const ira::TrainingAborted& e) {
    std::cerr << "ira: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "ira: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
