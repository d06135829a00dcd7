#include "amber/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace amber {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Maps an angle to [-pi, pi).
double wrap_angle(double a) {
  double w = std::fmod(a + kPi, 2.0 * kPi);
  if (w < 0.0) w += 2.0 * kPi;
  return w - kPi;
}

void check_action(const EnvSpec& spec, const Eigen::VectorXd& action, bool started) {
  if (!started) {
    throw std::logic_error("env: step() called before reset()");
  }
  if (action.size() != spec.action_dim) {
    throw std::invalid_argument("env: action has dimension " +
                                std::to_string(action.size()) + ", expected " +
                                std::to_string(spec.action_dim));
  }
}

Eigen::VectorXd clamp_action(const EnvSpec& spec, const Eigen::VectorXd& action) {
  return action.cwiseMax(spec.action_low).cwiseMin(spec.action_high);
}

}  // namespace

// ---------------------------------------------------------------- pendulum

namespace {
constexpr double kPendulumGravity = 10.0;
constexpr double kPendulumMass = 1.0;
constexpr double kPendulumLength = 1.0;
constexpr double kPendulumDt = 0.05;
constexpr double kPendulumMaxTorque = 2.0;
constexpr double kPendulumMaxSpeed = 8.0;
constexpr int kPendulumSteps = 200;
}  // namespace

PendulumEnv::PendulumEnv() {
  spec_.state_dim = 3;
  spec_.action_dim = 1;
  spec_.action_low = Eigen::VectorXd::Constant(1, -kPendulumMaxTorque);
  spec_.action_high = Eigen::VectorXd::Constant(1, kPendulumMaxTorque);
  spec_.max_episode_steps = kPendulumSteps;
}

Eigen::VectorXd PendulumEnv::observation() const {
  Eigen::VectorXd obs(3);
  obs << std::cos(angle_), std::sin(angle_), velocity_;
  return obs;
}

Eigen::VectorXd PendulumEnv::reset(Rng& rng) {
  angle_ = rng.uniform(-kPi, kPi);
  velocity_ = rng.uniform(-1.0, 1.0);
  steps_ = 0;
  started_ = true;
  return observation();
}

void PendulumEnv::set_state(double angle, double velocity) {
  angle_ = angle;
  velocity_ = velocity;
  steps_ = 0;
  started_ = true;
}

StepResult PendulumEnv::step(const Eigen::VectorXd& action) {
  check_action(spec_, action, started_);
  const double u = clamp_action(spec_, action)[0];

  const double a = wrap_angle(angle_);
  const double cost = a * a + 0.1 * velocity_ * velocity_ + 0.001 * u * u;

  const double accel = 3.0 * kPendulumGravity / (2.0 * kPendulumLength) * std::sin(angle_) +
                       3.0 / (kPendulumMass * kPendulumLength * kPendulumLength) * u;
  velocity_ = std::clamp(velocity_ + accel * kPendulumDt, -kPendulumMaxSpeed, kPendulumMaxSpeed);
  angle_ += velocity_ * kPendulumDt;
  ++steps_;

  StepResult result;
  result.next_state = observation();
  result.reward = -cost;
  result.done = steps_ >= spec_.max_episode_steps;
  return result;
}

// --------------------------------------------------------------- pointmass

namespace {
constexpr double kPointMassDt = 0.1;
constexpr int kPointMassSteps = 150;
const Eigen::Vector2d kPointMassGoal{0.5, 0.5};
}  // namespace

PointMassEnv::PointMassEnv() {
  spec_.state_dim = 4;
  spec_.action_dim = 2;
  spec_.action_low = Eigen::VectorXd::Constant(2, -1.0);
  spec_.action_high = Eigen::VectorXd::Constant(2, 1.0);
  spec_.max_episode_steps = kPointMassSteps;
}

Eigen::VectorXd PointMassEnv::observation() const {
  Eigen::VectorXd obs(4);
  obs << position_[0], position_[1], velocity_[0], velocity_[1];
  return obs;
}

Eigen::VectorXd PointMassEnv::reset(Rng& rng) {
  position_ << rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0);
  velocity_.setZero();
  steps_ = 0;
  started_ = true;
  return observation();
}

void PointMassEnv::set_state(const Eigen::Vector2d& position, const Eigen::Vector2d& velocity) {
  position_ = position;
  velocity_ = velocity;
  steps_ = 0;
  started_ = true;
}

StepResult PointMassEnv::step(const Eigen::VectorXd& action) {
  check_action(spec_, action, started_);
  const Eigen::Vector2d u = clamp_action(spec_, action);

  const double cost = (position_ - kPointMassGoal).squaredNorm() + 0.001 * u.squaredNorm();

  velocity_ += kPointMassDt * u;
  position_ += kPointMassDt * velocity_;
  ++steps_;

  StepResult result;
  result.next_state = observation();
  result.reward = -cost;
  result.done = steps_ >= spec_.max_episode_steps;
  return result;
}

// ----------------------------------------------------------------- synth-K

namespace {
constexpr double kSynthDt = 0.1;
constexpr int kSynthSteps = 100;
constexpr int kSynthMaxDims = 32;
}  // namespace

SynthEnv::SynthEnv(int action_dims) {
  if (action_dims < 1 || action_dims > kSynthMaxDims) {
    throw std::invalid_argument("synth env: action dimension must be in 1.." +
                                std::to_string(kSynthMaxDims));
  }
  spec_.state_dim = 2 * action_dims;
  spec_.action_dim = action_dims;
  spec_.action_low = Eigen::VectorXd::Constant(action_dims, -1.0);
  spec_.action_high = Eigen::VectorXd::Constant(action_dims, 1.0);
  spec_.max_episode_steps = kSynthSteps;
  positions_ = Eigen::VectorXd::Zero(action_dims);
  velocities_ = Eigen::VectorXd::Zero(action_dims);
}

Eigen::VectorXd SynthEnv::observation() const {
  Eigen::VectorXd obs(spec_.state_dim);
  obs << positions_, velocities_;
  return obs;
}

Eigen::VectorXd SynthEnv::reset(Rng& rng) {
  for (int k = 0; k < spec_.action_dim; ++k) {
    positions_[k] = rng.uniform(-1.0, 1.0);
  }
  velocities_.setZero();
  steps_ = 0;
  started_ = true;
  return observation();
}

void SynthEnv::set_state(const Eigen::VectorXd& positions, const Eigen::VectorXd& velocities) {
  if (positions.size() != spec_.action_dim || velocities.size() != spec_.action_dim) {
    throw std::invalid_argument("synth env: set_state dimension mismatch");
  }
  positions_ = positions;
  velocities_ = velocities;
  steps_ = 0;
  started_ = true;
}

StepResult SynthEnv::step(const Eigen::VectorXd& action) {
  check_action(spec_, action, started_);
  const Eigen::VectorXd u = clamp_action(spec_, action);

  double cost = 0.0;
  for (int k = 0; k < spec_.action_dim; ++k) {
    cost += positions_[k] * positions_[k] + 0.1 * velocities_[k] * velocities_[k] +
            0.001 * u[k] * u[k];
  }

  velocities_ += kSynthDt * u;
  positions_ += kSynthDt * velocities_;
  ++steps_;

  StepResult result;
  result.next_state = observation();
  result.reward = -cost;
  result.done = steps_ >= spec_.max_episode_steps;
  return result;
}

// ----------------------------------------------------------------- factory

std::unique_ptr<Env> make_env(const std::string& id) {
  if (id == "pendulum") return std::make_unique<PendulumEnv>();
  if (id == "pointmass") return std::make_unique<PointMassEnv>();
  if (id.rfind("synth-", 0) == 0) {
    const std::string suffix = id.substr(6);
    size_t used = 0;
    int k = 0;
    try {
      k = std::stoi(suffix, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("unknown environment id: " + id);
    }
    if (used != suffix.size()) {
      throw std::invalid_argument("unknown environment id: " + id);
    }
    return std::make_unique<SynthEnv>(k);
  }
  throw std::invalid_argument("unknown environment id: " + id);
}

}  // namespace amber
