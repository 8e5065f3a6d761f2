#include "rbvf/config.hpp"

#include <fstream>
#include <sstream>

namespace rbvf {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, sep))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

int to_int(const std::string& key, const std::string& v) {
  try {
    return std::stoi(v);
  } catch (...) {
    throw ConfigError("config key '" + key + "': expected integer, got '" + v + "'");
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    return std::stod(v);
  } catch (...) {
    throw ConfigError("config key '" + key + "': expected number, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config key '" + key + "': expected true/false, got '" + v + "'");
}

std::vector<int> hidden_layers(int count, int width) {
  return std::vector<int>(static_cast<std::size_t>(count), width);
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  AgentConfig& a = cfg.agent_cfg;
  if (key == "preset") apply_preset(cfg, value);
  else if (key == "env") cfg.env = value;
  else if (key == "agent") cfg.agent = value;
  else if (key == "critic_delta") cfg.critic_delta = value;
  else if (key == "episodes") cfg.episodes = to_int(key, value);
  else if (key == "out_dir") cfg.out_dir = value;
  else if (key == "overwrite") cfg.overwrite = to_bool(key, value);
  else if (key == "checkpoint_interval") cfg.checkpoint_interval = to_int(key, value);
  else if (key == "sweep_axis") cfg.sweep_axis = value;
  else if (key == "sweep_values") {
    cfg.sweep_values.clear();
    for (const auto& t : split(value, ',')) cfg.sweep_values.push_back(to_double(key, t));
  } else if (key == "seeds") {
    cfg.seeds.clear();
    for (const auto& t : split(value, ','))
      cfg.seeds.push_back(static_cast<std::uint64_t>(std::stoull(t)));
  } else if (key == "num_centroids") a.num_centroids = to_int(key, value);
  else if (key == "beta") a.beta = to_double(key, value);
  else if (key == "gamma") a.gamma = to_double(key, value);
  else if (key == "batch_size") a.batch_size = to_int(key, value);
  else if (key == "target_rate") a.target_rate = to_double(key, value);
  else if (key == "updates_per_episode") a.updates_per_episode = to_int(key, value);
  else if (key == "learning_rate") a.learning_rate = to_double(key, value);
  else if (key == "actor_learning_rate") a.actor_learning_rate = to_double(key, value);
  else if (key == "reward_clip") a.reward_clip = to_double(key, value);
  else if (key == "buffer_capacity")
    a.buffer_capacity = static_cast<std::size_t>(std::stoull(value));
  else if (key == "epsilon_start") a.epsilon_start = to_double(key, value);
  else if (key == "epsilon_decay") a.epsilon_decay = to_double(key, value);
  else if (key == "epsilon_min") a.epsilon_min = to_double(key, value);
  else if (key == "noise_scale") a.noise_scale = to_double(key, value);
  else if (key == "value_hidden") {
    a.value_hidden.clear();
    for (const auto& t : split(value, ',')) a.value_hidden.push_back(to_int(key, t));
  } else if (key == "centroid_hidden") {
    a.centroid_hidden.clear();
    for (const auto& t : split(value, ',')) a.centroid_hidden.push_back(to_int(key, t));
  } else if (key == "actor_hidden") {
    a.actor_hidden.clear();
    for (const auto& t : split(value, ',')) a.actor_hidden.push_back(to_int(key, t));
  } else {
    throw ConfigError("unknown config key: '" + key + "'");
  }
}

void validate(const RunConfig& cfg) {
  const AgentConfig& a = cfg.agent_cfg;
  if (cfg.agent != "rbf-dqn" && cfg.agent != "rbf-ddpg")
    throw ConfigError("config key 'agent': must be rbf-dqn or rbf-ddpg, got '" + cfg.agent + "'");
  if (cfg.critic_delta != "qlearning" && cfg.critic_delta != "sarsa")
    throw ConfigError("config key 'critic_delta': must be qlearning or sarsa");
  if (cfg.sweep_axis != "N" && cfg.sweep_axis != "beta")
    throw ConfigError("config key 'sweep_axis': must be N or beta");
  if (a.gamma < 0 || a.gamma >= 1)
    throw ConfigError("config key 'gamma': must be in [0,1), got " + std::to_string(a.gamma));
  if (a.target_rate <= 0 || a.target_rate > 1)
    throw ConfigError("config key 'target_rate': must be in (0,1]");
  if (a.beta < 0) throw ConfigError("config key 'beta': must be >= 0");
  if (a.num_centroids <= 0) throw ConfigError("config key 'num_centroids': must be positive");
  if (a.batch_size <= 0) throw ConfigError("config key 'batch_size': must be positive");
  if (a.learning_rate <= 0) throw ConfigError("config key 'learning_rate': must be positive");
  if (cfg.episodes < 0) throw ConfigError("config key 'episodes': must be >= 0");
  if (cfg.seeds.empty()) throw ConfigError("config key 'seeds': at least one seed required");
  for (double v : cfg.sweep_values)
    if (v <= 0) throw ConfigError("config key 'sweep_values': values must be positive");
  if (a.epsilon_start < 0 || a.epsilon_start > 1 || a.epsilon_min < 0 || a.epsilon_min > 1)
    throw ConfigError("config key 'epsilon_start'/'epsilon_min': must be in [0,1]");
}

}  // namespace

void apply_preset(RunConfig& cfg, const std::string& preset) {
  AgentConfig& a = cfg.agent_cfg;
  if (preset == "paper") {
    a.num_centroids = 100;
    a.value_hidden = hidden_layers(3, 512);
    a.centroid_hidden = hidden_layers(1, 512);
    a.actor_hidden = hidden_layers(1, 512);
    a.batch_size = 256;
    a.buffer_capacity = 500000;
    a.gamma = 0.99;
    a.target_rate = 0.005;
    a.updates_per_episode = 1000;
    a.learning_rate = 5e-4;
  } else if (preset == "desk") {
    a.num_centroids = 20;
    a.value_hidden = hidden_layers(2, 128);
    a.centroid_hidden = hidden_layers(1, 128);
    a.actor_hidden = hidden_layers(1, 128);
    a.batch_size = 64;
    a.buffer_capacity = 500000;
    a.gamma = 0.99;
    a.target_rate = 0.005;
    a.updates_per_episode = 50;
    a.learning_rate = 1e-3;
  } else {
    throw ConfigError("config key 'preset': must be desk or paper, got '" + preset + "'");
  }
  cfg.preset = preset;
}

RunConfig parse_config(const std::filesystem::path& file,
                       const std::vector<std::string>& overrides) {
  RunConfig cfg;
  apply_preset(cfg, cfg.preset);

  auto apply_line = [&cfg](const std::string& raw, const std::string& where) {
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') return;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected key=value, got '" + line + "'");
    apply_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  };

  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file: " + file.string());
    std::string line;
    while (std::getline(in, line)) apply_line(line, file.string());
  }
  for (const auto& ov : overrides) apply_line(ov, "override");

  validate(cfg);
  cfg.agent_cfg.validate();
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  const AgentConfig& a = cfg.agent_cfg;
  std::ostringstream os;
  os.precision(17);
  auto list_i = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
  };
  os << "preset=" << cfg.preset << "\n";
  os << "env=" << cfg.env << "\n";
  os << "agent=" << cfg.agent << "\n";
  os << "critic_delta=" << cfg.critic_delta << "\n";
  os << "episodes=" << cfg.episodes << "\n";
  os << "seeds=";
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) os << (i ? "," : "") << cfg.seeds[i];
  os << "\n";
  os << "num_centroids=" << a.num_centroids << "\n";
  os << "beta=" << a.beta << "\n";
  os << "gamma=" << a.gamma << "\n";
  os << "batch_size=" << a.batch_size << "\n";
  os << "target_rate=" << a.target_rate << "\n";
  os << "updates_per_episode=" << a.updates_per_episode << "\n";
  os << "learning_rate=" << a.learning_rate << "\n";
  os << "actor_learning_rate=" << a.actor_learning_rate << "\n";
  os << "reward_clip=" << a.reward_clip << "\n";
  os << "buffer_capacity=" << a.buffer_capacity << "\n";
  os << "value_hidden=" << list_i(a.value_hidden) << "\n";
  os << "centroid_hidden=" << list_i(a.centroid_hidden) << "\n";
  os << "actor_hidden=" << list_i(a.actor_hidden) << "\n";
  os << "epsilon_start=" << a.epsilon_start << "\n";
  os << "epsilon_decay=" << a.epsilon_decay << "\n";
  os << "epsilon_min=" << a.epsilon_min << "\n";
  os << "noise_scale=" << a.noise_scale << "\n";
  os << "checkpoint_interval=" << cfg.checkpoint_interval << "\n";
  os << "sweep_axis=" << cfg.sweep_axis << "\n";
  if (!cfg.sweep_values.empty()) {
    os << "sweep_values=";
    for (std::size_t i = 0; i < cfg.sweep_values.size(); ++i)
      os << (i ? "," : "") << cfg.sweep_values[i];
    os << "\n";
  }
  return os.str();
}

void prepare_output_dir(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  if (cfg.out_dir.empty()) throw ConfigError("out_dir must be set for this subcommand");
  const fs::path dir(cfg.out_dir);
  if (fs::exists(dir) && !fs::is_empty(dir) && !cfg.overwrite)
    throw ConfigError("output directory exists and is nonempty: " + dir.string() +
                      " (pass overwrite=true to allow)");
  fs::create_directories(dir);
  std::ofstream out(dir / "config.txt");
  out << "# resolved configuration (" << kBuildVersion << ")\n";
  out << serialize_config(cfg);
}

}  // namespace rbvf
