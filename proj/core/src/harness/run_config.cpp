#include "ira/harness/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "ira/envs/environment.hpp"
#include "ira/error.hpp"

namespace ira::harness {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw ConfigError("invalid value '" + std::string(value) + "' for '" + std::string(key) + "'");
}

double to_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value);
  return out;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view value) {
  // Accept "1e6"-style spellings for counts, as long as they are integral.
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec == std::errc() && ptr == value.data() + value.size()) return out;
  const double d = to_double(key, value);
  if (d < 0.0 && std::is_unsigned_v<Int>) bad_value(key, value);
  if (d != static_cast<double>(static_cast<Int>(d))) bad_value(key, value);
  return static_cast<Int>(d);
}

bool to_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on" || value.empty()) return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  bad_value(key, value);
}

std::vector<std::size_t> to_sizes(std::string_view key, std::string_view value) {
  std::vector<std::size_t> out;
  std::string text(value);
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream in(text);
  std::string item;
  while (in >> item) out.push_back(to_int<std::size_t>(key, item));
  if (out.empty()) bad_value(key, value);
  return out;
}

}  // namespace

std::string_view to_string(MuShape s) { return s == MuShape::linear ? "linear" : "exponential"; }

MuShape parse_mu_shape(std::string_view text) {
  if (text == "linear") return MuShape::linear;
  if (text == "exponential") return MuShape::exponential;
  throw ConfigError("unknown mu shape '" + std::string(text) + "'");
}

std::string RunConfig::resolved_label() const {
  return label.empty() ? std::string(agents::to_string(algo.algorithm)) : label;
}

void RunConfig::validate() const {
  algo.validate();
  const auto ids = envs::env_ids();
  if (std::find(ids.begin(), ids.end(), env_id) == ids.end()) {
    throw ConfigError("unknown environment id '" + env_id + "'");
  }
  if (total_steps < 0) throw ConfigError("steps must be >= 0");
  if (eval_interval <= 0) throw ConfigError("eval-interval must be positive");
  if (eval_episodes < 1) throw ConfigError("eval-episodes must be >= 1");
  if (batch_size == 0) throw ConfigError("batch-size must be positive");
  if (replay_capacity == 0 || action_buffer_capacity == 0) throw ConfigError("buffer capacities must be positive");
  if (warmup_steps < 1) throw ConfigError("warmup must be >= 1 so the replay buffer is never empty");
  if (log_interval <= 0) throw ConfigError("log-interval must be positive");
  if (probe_samples == 0) throw ConfigError("probe-samples must be positive");
  if (probe_horizon < 0) throw ConfigError("probe-horizon must be >= 0");
  if (mu_shape == MuShape::exponential && (algo.mu_start <= 0.0 || algo.mu_end <= 0.0)) {
    throw ConfigError("exponential mu decay needs positive endpoints");
  }
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["env"] = env_id;
  j["algo"] = std::string(agents::to_string(algo.algorithm));
  j["label"] = resolved_label();
  j["seed"] = seed;
  j["steps"] = total_steps;
  j["eval-interval"] = eval_interval;
  j["eval-episodes"] = eval_episodes;
  j["batch-size"] = batch_size;
  j["replay-capacity"] = replay_capacity;
  j["action-buffer"] = action_buffer_capacity;
  j["warmup"] = warmup_steps;
  j["log-interval"] = log_interval;
  j["probe-samples"] = probe_samples;
  j["probe-horizon"] = probe_horizon;
  j["rde"] = algo.use_rde;
  j["gag"] = algo.use_gag;
  j["d"] = algo.d;
  j["alpha"] = algo.alpha;
  j["k"] = algo.k;
  j["mu-start"] = algo.mu_start;
  j["mu-end"] = algo.mu_end;
  j["mu-shape"] = std::string(to_string(mu_shape));
  j["gamma"] = algo.gamma;
  j["tau"] = algo.tau;
  j["policy-noise"] = algo.policy_noise;
  j["noise-clip"] = algo.noise_clip;
  j["exploration-sigma"] = algo.exploration_sigma;
  j["actor-lr"] = algo.actor_lr;
  j["critic-lr"] = algo.critic_lr;
  j["metric"] = std::string(memory::to_string(algo.metric));
  j["hidden"] = algo.hidden_sizes;
  return j;
}

const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys{
      "env",          "algo",          "label",         "seed",          "steps",
      "alpha",        "k",             "mu-start",      "mu-end",        "mu-shape",
      "d",            "metric",        "no-rde",        "no-gag",        "rde",
      "gag",          "action-buffer", "eval-interval", "eval-episodes", "out",
      "batch-size",   "replay-capacity", "warmup",      "gamma",         "tau",
      "policy-noise", "noise-clip",    "exploration-sigma", "actor-lr",  "critic-lr",
      "hidden",       "probe-samples", "probe-horizon", "log-interval"};
  return keys;
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view value) {
  auto& a = c.algo;
  if (key == "env") {
    c.env_id = std::string(value);
  } else if (key == "algo") {
    const auto hidden = a.hidden_sizes;
    a = agents::AlgoConfig::defaults_for(agents::parse_algorithm(value));
    a.hidden_sizes = hidden;
  } else if (key == "label") {
    c.label = std::string(value);
  } else if (key == "seed") {
    c.seed = to_int<std::uint64_t>(key, value);
  } else if (key == "steps") {
    c.total_steps = to_int<std::int64_t>(key, value);
  } else if (key == "alpha") {
    a.alpha = to_double(key, value);
  } else if (key == "k") {
    a.k = to_int<std::size_t>(key, value);
  } else if (key == "mu-start") {
    a.mu_start = to_double(key, value);
  } else if (key == "mu-end") {
    a.mu_end = to_double(key, value);
  } else if (key == "mu-shape") {
    c.mu_shape = parse_mu_shape(value);
  } else if (key == "d") {
    a.d = to_int<int>(key, value);
  } else if (key == "metric") {
    a.metric = memory::parse_metric(value);
  } else if (key == "no-rde") {
    a.use_rde = !to_bool(key, value);
  } else if (key == "no-gag") {
    a.use_gag = !to_bool(key, value);
  } else if (key == "rde") {
    a.use_rde = to_bool(key, value);
  } else if (key == "gag") {
    a.use_gag = to_bool(key, value);
  } else if (key == "action-buffer") {
    c.action_buffer_capacity = to_int<std::size_t>(key, value);
  } else if (key == "eval-interval") {
    c.eval_interval = to_int<std::int64_t>(key, value);
  } else if (key == "eval-episodes") {
    c.eval_episodes = to_int<int>(key, value);
  } else if (key == "out") {
    c.output_dir = std::string(value);
  } else if (key == "batch-size") {
    c.batch_size = to_int<std::size_t>(key, value);
  } else if (key == "replay-capacity") {
    c.replay_capacity = to_int<std::size_t>(key, value);
  } else if (key == "warmup") {
    c.warmup_steps = to_int<std::int64_t>(key, value);
  } else if (key == "gamma") {
    a.gamma = to_double(key, value);
  } else if (key == "tau") {
    a.tau = to_double(key, value);
  } else if (key == "policy-noise") {
    a.policy_noise = to_double(key, value);
  } else if (key == "noise-clip") {
    a.noise_clip = to_double(key, value);
  } else if (key == "exploration-sigma") {
    a.exploration_sigma = to_double(key, value);
  } else if (key == "actor-lr") {
    a.actor_lr = to_double(key, value);
  } else if (key == "critic-lr") {
    a.critic_lr = to_double(key, value);
  } else if (key == "hidden") {
    a.hidden_sizes = to_sizes(key, value);
  } else if (key == "probe-samples") {
    c.probe_samples = to_int<std::size_t>(key, value);
  } else if (key == "probe-horizon") {
    c.probe_horizon = to_int<int>(key, value);
  } else if (key == "log-interval") {
    c.log_interval = to_int<std::int64_t>(key, value);
  } else {
    throw ConfigError("unknown setting '" + std::string(key) + "'");
  }
}

RunConfig resolve_config(const std::vector<Setting>& settings) {
  RunConfig config;
  std::string algo;
  for (const auto& [key, value] : settings) {
    if (key == "algo") algo = value;
  }
  if (!algo.empty()) apply_setting(config, "algo", algo);
  for (const auto& [key, value] : settings) {
    if (key != "algo") apply_setting(config, key, value);
  }
  config.validate();
  return config;
}

std::vector<Setting> parse_settings(std::string_view text) {
  std::vector<Setting> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string body = trim(line);
    if (body.empty()) continue;
    if (body.rfind("--", 0) == 0) body.erase(0, 2);
    std::string key;
    std::string value;
    if (const auto eq = body.find('='); eq != std::string::npos) {
      key = trim(std::string_view(body).substr(0, eq));
      value = trim(std::string_view(body).substr(eq + 1));
    } else if (const auto sp = body.find_first_of(" \t"); sp != std::string::npos) {
      key = trim(std::string_view(body).substr(0, sp));
      value = trim(std::string_view(body).substr(sp + 1));
    } else {
      key = body;  // bare flag such as "no-rde"
    }
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": missing key");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

std::vector<Setting> read_settings_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_settings(buffer.str());
}

}  // namespace ira::harness
