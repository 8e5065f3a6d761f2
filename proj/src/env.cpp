#include "rbvf/env.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rbvf {

double wrap_angle(double theta) {
  const double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta + std::numbers::pi, two_pi);
  if (t <= 0.0) t += two_pi;
  return t - std::numbers::pi;
}

namespace {
Vector clip(const Vector& a, const Vector& lo, const Vector& hi) {
  return a.cwiseMax(lo).cwiseMin(hi);
}
}  // namespace

PendulumEnv::PendulumEnv() {
  spec_.obs_dim = 3;
  spec_.action_dim = 1;
  spec_.action_low = Vector::Constant(1, -2.0);
  spec_.action_high = Vector::Constant(1, 2.0);
  spec_.max_episode_steps = 200;
}

Vector PendulumEnv::obs() const {
  Vector o(3);
  o << std::cos(theta_), std::sin(theta_), theta_dot_;
  return o;
}

double PendulumEnv::energy() const {
  // I = m*l^2/3 rod about its end; height term m*g*(l/2)*cos(theta), theta
  // measured from upright.
  return (1.0 / 6.0) * theta_dot_ * theta_dot_ + 5.0 * std::cos(theta_);
}

Vector PendulumEnv::reset(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> th(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> thdot(-1.0, 1.0);
  theta_ = th(rng);
  theta_dot_ = thdot(rng);
  steps_ = 0;
  done_ = false;
  return obs();
}

StepResult PendulumEnv::step(const Vector& action) {
  if (done_) throw std::logic_error("PendulumEnv::step after episode end");
  const double g = 10.0, m = 1.0, l = 1.0, dt = 0.05;
  const double u = std::clamp(action(0), -2.0, 2.0);

  const double angle = wrap_angle(theta_);
  const double cost = angle * angle + 0.1 * theta_dot_ * theta_dot_ + 0.001 * u * u;

  // Semi-implicit Euler.
  theta_dot_ += (3.0 * g / (2.0 * l) * std::sin(theta_) + 3.0 / (m * l * l) * u) * dt;
  theta_dot_ = std::clamp(theta_dot_, -8.0, 8.0);
  theta_ += theta_dot_ * dt;

  ++steps_;
  StepResult res;
  res.next_obs = obs();
  res.reward = -cost;
  res.terminal = false;
  res.done = steps_ >= spec_.max_episode_steps;
  done_ = res.done;
  return res;
}

PointMass2dEnv::PointMass2dEnv() {
  spec_.obs_dim = 4;
  spec_.action_dim = 2;
  spec_.action_low = Vector::Constant(2, -1.0);
  spec_.action_high = Vector::Constant(2, 1.0);
  spec_.max_episode_steps = 100;
  goal_ << 0.5, 0.5;
}

Vector PointMass2dEnv::obs() const {
  Vector o(4);
  o << pos_(0), pos_(1), vel_(0), vel_(1);
  return o;
}

Vector PointMass2dEnv::reset(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  pos_ << u(rng), u(rng);
  vel_.setZero();
  steps_ = 0;
  done_ = false;
  return obs();
}

StepResult PointMass2dEnv::step(const Vector& action) {
  if (done_) throw std::logic_error("PointMass2dEnv::step after episode end");
  const double dt = 0.1;
  const Vector a = clip(action, spec_.action_low, spec_.action_high);

  vel_ += a * dt;
  vel_ = vel_.cwiseMax(-1.0).cwiseMin(1.0);
  pos_ += vel_ * dt;
  pos_ = pos_.cwiseMax(-1.0).cwiseMin(1.0);

  const double dist = (pos_ - goal_).norm();
  ++steps_;
  StepResult res;
  res.next_obs = obs();
  res.reward = -dist - 0.01 * a.squaredNorm();
  res.terminal = dist < 0.05;
  res.done = res.terminal || steps_ >= spec_.max_episode_steps;
  done_ = res.done;
  return res;
}

std::unique_ptr<Env> make_env(const std::string& name) {
  if (name == "pendulum") return std::make_unique<PendulumEnv>();
  if (name == "pointmass2d") return std::make_unique<PointMass2dEnv>();
  throw std::invalid_argument("unknown environment: " + name);
}

}  // namespace rbvf
