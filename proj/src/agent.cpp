#include "rbvf/agent.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace rbvf {

void AgentConfig::validate() const {
  if (num_centroids <= 0) throw std::invalid_argument("num_centroids must be positive");
  if (beta < 0) throw std::invalid_argument("beta must be >= 0");
  if (gamma < 0 || gamma >= 1) throw std::invalid_argument("gamma must be in [0,1)");
  if (target_rate <= 0 || target_rate > 1) throw std::invalid_argument("target_rate must be in (0,1]");
  if (batch_size <= 0) throw std::invalid_argument("batch_size must be positive");
  if (updates_per_episode < 0) throw std::invalid_argument("updates_per_episode must be >= 0");
  if (learning_rate <= 0) throw std::invalid_argument("learning_rate must be positive");
  if (reward_clip <= 0) throw std::invalid_argument("reward_clip must be positive");
  if (epsilon_start < 0 || epsilon_start > 1 || epsilon_min < 0 || epsilon_min > 1)
    throw std::invalid_argument("epsilon bounds must be in [0,1]");
}

RbvfModelSpec make_model_spec(const AgentConfig& cfg, const EnvSpec& env_spec) {
  RbvfModelSpec spec;
  spec.state_dim = env_spec.obs_dim;
  spec.action_dim = env_spec.action_dim;
  spec.num_centroids = cfg.num_centroids;
  spec.beta = cfg.beta;
  spec.value_hidden = cfg.value_hidden;
  spec.centroid_hidden = cfg.centroid_hidden;
  spec.action_low = env_spec.action_low;
  spec.action_high = env_spec.action_high;
  return spec;
}

void polyak_update(ParamStore& target, const ParamStore& online, double rate) {
  for (auto& [name, entry] : target) {
    const Matrix& src = online.values(name);
    if (src.rows() != entry.values.rows() || src.cols() != entry.values.cols())
      throw std::invalid_argument("polyak_update: shape mismatch for " + name);
    entry.values = (1.0 - rate) * entry.values + rate * src;
  }
}

Vector epsilon_greedy_action(const RbvfNetwork& net, const ParamStore& params, const Vector& s,
                             double epsilon, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < epsilon) {
    const auto& spec = net.spec();
    Vector a(spec.action_dim);
    for (int j = 0; j < spec.action_dim; ++j) {
      std::uniform_real_distribution<double> u(spec.action_low(j), spec.action_high(j));
      a(j) = u(rng);
    }
    return a;
  }
  return net.max_over_centroids(params, s).best_action;
}

double qlearning_target(double r, const Vector& next_state, bool terminal,
                        const RbvfNetwork& net, const ParamStore& target_params, double gamma) {
  if (terminal) return r;
  return r + gamma * net.max_over_centroids(target_params, next_state).best_value;
}

namespace {

struct BatchTensors {
  Matrix states, actions, next_states;
  Vector rewards;
  std::vector<bool> terminal;
};

BatchTensors gather(const std::vector<const Transition*>& batch) {
  const Eigen::Index b = static_cast<Eigen::Index>(batch.size());
  BatchTensors t;
  t.states.resize(b, batch[0]->state.size());
  t.actions.resize(b, batch[0]->action.size());
  t.next_states.resize(b, batch[0]->next_state.size());
  t.rewards.resize(b);
  t.terminal.resize(batch.size());
  for (Eigen::Index i = 0; i < b; ++i) {
    t.states.row(i) = batch[i]->state.transpose();
    t.actions.row(i) = batch[i]->action.transpose();
    t.next_states.row(i) = batch[i]->next_state.transpose();
    t.rewards(i) = batch[i]->reward;
    t.terminal[static_cast<std::size_t>(i)] = batch[i]->terminal;
  }
  return t;
}

double td_update(const BatchTensors& t, const Vector& bootstrap, const RbvfNetwork& net,
                 ParamStore& params, RmsProp& opt, double gamma) {
  const Eigen::Index b = t.rewards.size();
  Vector targets(b);
  for (Eigen::Index i = 0; i < b; ++i)
    targets(i) = t.terminal[static_cast<std::size_t>(i)] ? t.rewards(i)
                                                         : t.rewards(i) + gamma * bootstrap(i);
  RbvfContext ctx;
  const Vector q = net.forward(params, t.states, t.actions, ctx);
  const Vector resid = q - targets;
  const double loss = resid.squaredNorm() / static_cast<double>(b);
  if (!std::isfinite(loss)) throw OptimizerError("td update: non-finite loss, step aborted");
  const Vector dq = 2.0 / static_cast<double>(b) * resid;
  net.backward(params, ctx, dq);
  opt.step(params);
  return loss;
}

}  // namespace

double dqn_update(const std::vector<const Transition*>& batch, const RbvfNetwork& net,
                  ParamStore& params, const ParamStore& target_params, RmsProp& opt,
                  const AgentConfig& cfg) {
  if (batch.empty()) throw std::invalid_argument("dqn_update: empty batch");
  const BatchTensors t = gather(batch);
  const Vector bootstrap = net.max_over_centroids_batch(target_params, t.next_states);
  return td_update(t, bootstrap, net, params, opt, cfg.gamma);
}

Actor::Actor(int state_dim, std::vector<int> hidden, Vector action_low, Vector action_high,
             std::string prefix)
    : net_(MlpSpec{state_dim, std::move(hidden), static_cast<int>(action_low.size()),
                   Activation::Relu, Activation::Tanh},
           std::move(prefix)),
      low_(std::move(action_low)),
      high_(std::move(action_high)) {}

void Actor::init_params(ParamStore& store, std::mt19937_64& rng) const {
  net_.init_params(store, rng);
}

Matrix Actor::forward(const ParamStore& store, const Matrix& states, MlpContext& ctx) const {
  Matrix t = net_.forward(store, states, ctx);
  for (Eigen::Index j = 0; j < t.cols(); ++j) {
    const double half = 0.5 * (high_(j) - low_(j));
    const double mid = 0.5 * (high_(j) + low_(j));
    t.col(j) = (t.col(j).array() * half + mid).matrix();
  }
  return t;
}

Vector Actor::forward_one(const ParamStore& store, const Vector& s) const {
  MlpContext ctx;
  return forward(store, s.transpose(), ctx).row(0).transpose();
}

void Actor::backward(ParamStore& store, const MlpContext& ctx, const Matrix& d_actions) const {
  Matrix dt = d_actions;
  for (Eigen::Index j = 0; j < dt.cols(); ++j) dt.col(j) *= 0.5 * (high_(j) - low_(j));
  net_.backward(store, ctx, dt);
}

double ddpg_delta(CriticDelta type, const Transition& t, const RbvfNetwork& critic,
                  const ParamStore& critic_params, const ParamStore& eval_params,
                  const Actor& actor, const ParamStore& actor_params, double gamma) {
  const double q_sa = critic.forward_one(critic_params, t.state, t.action);
  if (t.terminal) return t.reward - q_sa;
  double bootstrap;
  if (type == CriticDelta::QLearning) {
    bootstrap = critic.max_over_centroids(eval_params, t.next_state).best_value;
  } else {
    bootstrap = critic.forward_one(eval_params, t.next_state,
                                   actor.forward_one(actor_params, t.next_state));
  }
  return t.reward + gamma * bootstrap - q_sa;
}

namespace {

struct RolloutStats {
  double ret = 0.0;
  int steps = 0;
};

RolloutStats rollout(Env& env, ReplayBuffer& buffer, const AgentConfig& cfg,
                     std::uint64_t env_seed,
                     const std::function<Vector(const Vector&)>& policy) {
  RolloutStats stats;
  Vector s = env.reset(env_seed);
  bool done = false;
  while (!done) {
    const Vector a = policy(s);
    const StepResult r = env.step(a);
    Transition t;
    t.state = s;
    t.action = a;
    t.reward = std::clamp(r.reward, -cfg.reward_clip, cfg.reward_clip);
    t.next_state = r.next_obs;
    t.terminal = r.terminal;
    buffer.push(std::move(t));
    stats.ret += r.reward;  // reported returns use raw rewards
    ++stats.steps;
    s = r.next_obs;
    done = r.done;
  }
  return stats;
}

double epsilon_at(const AgentConfig& cfg, int episode) {
  return std::max(cfg.epsilon_min, cfg.epsilon_start * std::pow(cfg.epsilon_decay, episode));
}

}  // namespace

TrainResult run_rbf_dqn(const AgentConfig& cfg, Env& env, int episodes, std::uint64_t seed,
                        const EpisodeCallback& on_episode) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  RbvfNetwork net(make_model_spec(cfg, env.spec()));
  ParamStore params;
  net.init_params(params, rng);
  ParamStore target_params = params.snapshot();
  RmsProp opt(cfg.learning_rate);
  ReplayBuffer buffer(cfg.buffer_capacity);

  TrainResult result{TrainingLog{}, std::move(params), std::nullopt};
  for (int ep = 0; ep < episodes; ++ep) {
    const auto start = std::chrono::steady_clock::now();
    const double eps = epsilon_at(cfg, ep);
    const RolloutStats stats =
        rollout(env, buffer, cfg, rng(), [&](const Vector& s) {
          return epsilon_greedy_action(net, result.params, s, eps, rng);
        });

    double loss_sum = 0.0;
    int updates = 0;
    if (buffer.size() >= static_cast<std::size_t>(cfg.batch_size)) {
      for (int u = 0; u < cfg.updates_per_episode; ++u) {
        const auto batch = buffer.sample(static_cast<std::size_t>(cfg.batch_size), rng);
        loss_sum += dqn_update(batch, net, result.params, target_params, opt, cfg);
        polyak_update(target_params, result.params, cfg.target_rate);
        ++updates;
      }
    }

    EpisodeRecord rec;
    rec.episode = ep;
    rec.steps = stats.steps;
    rec.episode_return = stats.ret;
    rec.mean_loss = updates > 0 ? loss_sum / updates : 0.0;
    rec.epsilon = eps;
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            start).count();
    result.log.push_back(rec);
    if (on_episode) on_episode(rec, result.params);
  }
  return result;
}

TrainResult run_rbf_ddpg(const AgentConfig& cfg, Env& env, int episodes, std::uint64_t seed,
                         CriticDelta critic_delta, const EpisodeCallback& on_episode) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  const EnvSpec& espec = env.spec();
  RbvfNetwork critic(make_model_spec(cfg, espec));
  Actor actor(espec.obs_dim, cfg.actor_hidden, espec.action_low, espec.action_high);

  ParamStore critic_params, actor_params;
  critic.init_params(critic_params, rng);
  actor.init_params(actor_params, rng);
  ParamStore critic_target = critic_params.snapshot();

  RmsProp critic_opt(cfg.learning_rate);
  RmsProp actor_opt(cfg.actor_learning_rate);
  ReplayBuffer buffer(cfg.buffer_capacity);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const Vector sigma = cfg.noise_scale * 0.5 * (espec.action_high - espec.action_low);

  TrainResult result{TrainingLog{}, std::move(critic_params), std::move(actor_params)};
  for (int ep = 0; ep < episodes; ++ep) {
    const auto start = std::chrono::steady_clock::now();
    const RolloutStats stats =
        rollout(env, buffer, cfg, rng(), [&](const Vector& s) {
          Vector a = actor.forward_one(*result.actor_params, s);
          for (Eigen::Index j = 0; j < a.size(); ++j) a(j) += sigma(j) * gauss(rng);
          return a.cwiseMax(espec.action_low).cwiseMin(espec.action_high).eval();
        });

    double loss_sum = 0.0;
    int updates = 0;
    if (buffer.size() >= static_cast<std::size_t>(cfg.batch_size)) {
      for (int u = 0; u < cfg.updates_per_episode; ++u) {
        const auto batch = buffer.sample(static_cast<std::size_t>(cfg.batch_size), rng);
        const BatchTensors t = gather(batch);

        Vector bootstrap;
        if (critic_delta == CriticDelta::QLearning) {
          bootstrap = critic.max_over_centroids_batch(critic_target, t.next_states);
        } else {
          MlpContext actx;
          const Matrix next_a = actor.forward(*result.actor_params, t.next_states, actx);
          RbvfContext cctx;
          bootstrap = critic.forward(critic_target, t.next_states, next_a, cctx);
        }
        loss_sum += td_update(t, bootstrap, critic, result.params, critic_opt, cfg.gamma);
        ++updates;

        // Actor ascent on Q(s, pi(s)); gradient flows through the RBF layer
        // with respect to the action input.
        MlpContext actor_ctx;
        const Matrix pi_a = actor.forward(*result.actor_params, t.states, actor_ctx);
        RbvfContext critic_ctx;
        critic.forward(result.params, t.states, pi_a, critic_ctx);
        const Vector dq = Vector::Constant(t.states.rows(),
                                           -1.0 / static_cast<double>(t.states.rows()));
        const Matrix d_actions = critic.backward(result.params, critic_ctx, dq);
        actor.backward(*result.actor_params, actor_ctx, d_actions);
        actor_opt.step(*result.actor_params);
        result.params.zero_grads();  // critic grads from the actor pass are discarded

        polyak_update(critic_target, result.params, cfg.target_rate);
      }
    }

    EpisodeRecord rec;
    rec.episode = ep;
    rec.steps = stats.steps;
    rec.episode_return = stats.ret;
    rec.mean_loss = updates > 0 ? loss_sum / updates : 0.0;
    rec.epsilon = 0.0;
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            start).count();
    result.log.push_back(rec);
    if (on_episode) on_episode(rec, result.params);
  }
  return result;
}

double evaluate_greedy(const RbvfNetwork& net, const ParamStore& params, Env& env,
                       std::uint64_t seed) {
  Vector s = env.reset(seed);
  double ret = 0.0;
  bool done = false;
  while (!done) {
    const StepResult r = env.step(net.max_over_centroids(params, s).best_action);
    ret += r.reward;
    s = r.next_obs;
    done = r.done;
  }
  return ret;
}

}  // namespace rbvf
