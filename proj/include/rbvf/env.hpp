#pragma once

#include <memory>
#include <random>
#include <string>

#include "rbvf/param_store.hpp"

namespace rbvf {

struct EnvSpec {
  int obs_dim = 0;
  int action_dim = 0;
  Vector action_low;
  Vector action_high;
  int max_episode_steps = 0;
};

struct StepResult {
  Vector next_obs;
  double reward = 0.0;
  bool done = false;      // terminal state reached or step cap hit
  bool terminal = false;  // true termination only (not step-cap truncation)
};

/// Episodic continuous-control environment. Actions are clipped into the box
/// before dynamics. Trajectories are bitwise deterministic given (seed,
/// action sequence).
class Env {
 public:
  virtual ~Env() = default;
  virtual const EnvSpec& spec() const = 0;
  virtual Vector reset(std::uint64_t seed) = 0;
  virtual StepResult step(const Vector& action) = 0;
};

/// Standard swing-up pendulum: g=10, m=1, l=1, dt=0.05, torque in [-2,2],
/// reward -(angle^2 + 0.1*thdot^2 + 0.001*u^2), 200-step episodes, no early
/// termination. Observation is (cos th, sin th, thdot).
class PendulumEnv : public Env {
 public:
  PendulumEnv();
  const EnvSpec& spec() const override { return spec_; }
  Vector reset(std::uint64_t seed) override;
  StepResult step(const Vector& action) override;

  double theta() const { return theta_; }
  double theta_dot() const { return theta_dot_; }
  /// Rod-pendulum mechanical energy, for integrator sanity checks.
  double energy() const;

 private:
  Vector obs() const;
  EnvSpec spec_;
  double theta_ = 0.0, theta_dot_ = 0.0;
  int steps_ = 0;
  bool done_ = true;
};

/// 2-D point mass in [-1,1]^2: state (position, velocity), action is an
/// acceleration in [-1,1]^2, reward -||pos-goal|| - 0.01*||a||^2, done when
/// within 0.05 of the goal at (0.5, 0.5). 100-step episodes.
class PointMass2dEnv : public Env {
 public:
  PointMass2dEnv();
  const EnvSpec& spec() const override { return spec_; }
  Vector reset(std::uint64_t seed) override;
  StepResult step(const Vector& action) override;

 private:
  Vector obs() const;
  EnvSpec spec_;
  Eigen::Vector2d pos_, vel_, goal_;
  int steps_ = 0;
  bool done_ = true;
};

/// Factory keyed by the RunConfig env name ("pendulum", "pointmass2d").
std::unique_ptr<Env> make_env(const std::string& name);

double wrap_angle(double theta);  // wrap to (-pi, pi]

}  // namespace rbvf
