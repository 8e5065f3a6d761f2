#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rbvf/agent.hpp"

namespace rbvf {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Full experiment description. Every field has a documented default; the
/// "paper" preset matches the documented large-scale settings, the "desk"
/// preset is sized so the test suite runs in minutes.
struct RunConfig {
  std::string env = "pendulum";
  std::string agent = "rbf-dqn";  // rbf-dqn | rbf-ddpg
  std::string preset = "desk";    // desk | paper
  std::string critic_delta = "qlearning";  // rbf-ddpg only: qlearning | sarsa
  AgentConfig agent_cfg;
  int episodes = 200;
  std::vector<std::uint64_t> seeds{0};
  std::string out_dir;
  bool overwrite = false;
  int checkpoint_interval = 0;  // episodes between checkpoints; 0 = final only
  // sweep subcommand
  std::string sweep_axis = "N";  // N | beta
  std::vector<double> sweep_values;
};

/// Applies a preset, then key=value lines from `file` (empty path allowed),
/// then explicit overrides, and validates. Unknown keys and out-of-range
/// values are errors naming the offending key.
RunConfig parse_config(const std::filesystem::path& file,
                       const std::vector<std::string>& overrides);

/// Resolved key=value form, suitable for echoing into the output directory
/// and for bitwise-reproducible reruns.
std::string serialize_config(const RunConfig& cfg);

void apply_preset(RunConfig& cfg, const std::string& preset);

/// Creates out_dir and writes provenance (resolved config, seed list, build
/// version). An existing nonempty directory is an error unless overwrite.
void prepare_output_dir(const RunConfig& cfg);

inline constexpr const char* kBuildVersion = "rbvf 1.0.0";

}  // namespace rbvf
