#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rbvf/env.hpp"
#include "rbvf/replay_buffer.hpp"
#include "rbvf/rbvf_model.hpp"
#include "rbvf/rmsprop.hpp"

namespace rbvf {

struct AgentConfig {
  int num_centroids = 100;
  double beta = 1.0;
  double gamma = 0.99;
  int batch_size = 256;
  double target_rate = 0.005;        // polyak coefficient
  int updates_per_episode = 1000;
  double learning_rate = 5e-4;
  double actor_learning_rate = 5e-4;
  double reward_clip = 20.0;         // stored rewards clipped to [-clip, clip]
  std::size_t buffer_capacity = 500000;
  std::vector<int> value_hidden{512, 512, 512};
  std::vector<int> centroid_hidden{512};
  std::vector<int> actor_hidden{512};
  double epsilon_start = 0.5;
  double epsilon_decay = 0.99;       // epsilon = max(min, start * decay^episode)
  double epsilon_min = 0.05;
  double noise_scale = 0.1;          // DDPG: sigma = scale * box half-width

  void validate() const;
};

struct EpisodeRecord {
  int episode = 0;
  int steps = 0;
  double episode_return = 0.0;  // unclipped rewards
  double mean_loss = 0.0;
  double epsilon = 0.0;
  double wall_ms = 0.0;
};

using TrainingLog = std::vector<EpisodeRecord>;

/// theta_minus <- (1-rate)*theta_minus + rate*theta, elementwise.
void polyak_update(ParamStore& target, const ParamStore& online, double rate);

/// With probability epsilon, a uniform sample from the action box; otherwise
/// the best-centroid action. Always inside the box.
Vector epsilon_greedy_action(const RbvfNetwork& net, const ParamStore& params, const Vector& s,
                             double epsilon, std::mt19937_64& rng);

/// r if terminal, else r + gamma * max_i Q(s', a_i(s'; theta-); theta-).
/// Centroids and values both come from the target parameters.
double qlearning_target(double r, const Vector& next_state, bool terminal,
                        const RbvfNetwork& net, const ParamStore& target_params, double gamma);

/// One minibatch step of the squared-TD-error loss (targets detached).
/// Returns the pre-step loss. Non-finite loss aborts without stepping.
double dqn_update(const std::vector<const Transition*>& batch, const RbvfNetwork& net,
                  ParamStore& params, const ParamStore& target_params, RmsProp& opt,
                  const AgentConfig& cfg);

enum class CriticDelta { QLearning, Sarsa };

/// Deterministic actor: MLP with tanh output affinely scaled to the box.
class Actor {
 public:
  Actor(int state_dim, std::vector<int> hidden, Vector action_low, Vector action_high,
        std::string prefix = "pi");
  void init_params(ParamStore& store, std::mt19937_64& rng) const;
  Matrix forward(const ParamStore& store, const Matrix& states, MlpContext& ctx) const;
  Vector forward_one(const ParamStore& store, const Vector& s) const;
  /// d_actions is B x d in action units; accumulates actor parameter grads.
  void backward(ParamStore& store, const MlpContext& ctx, const Matrix& d_actions) const;
  const Mlp& net() const { return net_; }

 private:
  Mlp net_;
  Vector low_, high_;
};

/// TD residual of Eq-style critic updates: r + gamma*bootstrap - Q(s,a).
/// QLearning bootstraps on max-over-centroids under eval_params; Sarsa on
/// Q(s', actor(s')).
double ddpg_delta(CriticDelta type, const Transition& t, const RbvfNetwork& critic,
                  const ParamStore& critic_params, const ParamStore& eval_params,
                  const Actor& actor, const ParamStore& actor_params, double gamma);

struct TrainResult {
  TrainingLog log;
  ParamStore params;         // critic / value parameters at end of training
  std::optional<ParamStore> actor_params;
};

using EpisodeCallback = std::function<void(const EpisodeRecord&, const ParamStore&)>;

TrainResult run_rbf_dqn(const AgentConfig& cfg, Env& env, int episodes, std::uint64_t seed,
                        const EpisodeCallback& on_episode = nullptr);

TrainResult run_rbf_ddpg(const AgentConfig& cfg, Env& env, int episodes, std::uint64_t seed,
                         CriticDelta critic_delta, const EpisodeCallback& on_episode = nullptr);

/// Greedy rollout (no exploration); returns the undiscounted return.
double evaluate_greedy(const RbvfNetwork& net, const ParamStore& params, Env& env,
                       std::uint64_t seed);

RbvfModelSpec make_model_spec(const AgentConfig& cfg, const EnvSpec& env_spec);

}  // namespace rbvf
