#ifndef AMBER_ENV_HPP_
#define AMBER_ENV_HPP_

#include <Eigen/Core>
#include <memory>
#include <string>

#include "amber/rng.hpp"

namespace amber {

struct EnvSpec {
  int state_dim = 0;
  int action_dim = 0;
  Eigen::VectorXd action_low;
  Eigen::VectorXd action_high;
  int max_episode_steps = 0;
};

struct StepResult {
  Eigen::VectorXd next_state;
  double reward = 0.0;
  bool done = false;
};

// Episodic environment interface. Instances are single-threaded state
// machines; they may be moved between threads but never shared.
class Env {
 public:
  virtual ~Env() = default;
  virtual const EnvSpec& spec() const = 0;
  virtual Eigen::VectorXd reset(Rng& rng) = 0;
  // Applies the action clamped to [action_low, action_high] and advances one
  // step. done=true when the step counter reaches max_episode_steps.
  // Throws std::invalid_argument on wrong action dimension and
  // std::logic_error if called before reset().
  virtual StepResult step(const Eigen::VectorXd& action) = 0;
};

// Torque-controlled swing-up pendulum, 200-step episodes.
// Observation (cos a, sin a, da/dt) with a=0 upright; action is a single
// torque in [-2, 2]. Reward = -(wrap(a)^2 + 0.1 (da/dt)^2 + 0.001 u^2)
// evaluated at the pre-step state. Constants: g=10, m=1, l=1, dt=0.05,
// |da/dt| capped at 8. Initial angle uniform in [-pi, pi], initial velocity
// uniform in [-1, 1].
class PendulumEnv final : public Env {
 public:
  PendulumEnv();
  const EnvSpec& spec() const override { return spec_; }
  Eigen::VectorXd reset(Rng& rng) override;
  StepResult step(const Eigen::VectorXd& action) override;
  void set_state(double angle, double velocity);

 private:
  Eigen::VectorXd observation() const;
  EnvSpec spec_;
  double angle_ = 0.0;
  double velocity_ = 0.0;
  int steps_ = 0;
  bool started_ = false;
};

// Planar point mass pushed by a 2-d force toward a fixed goal, 150-step
// episodes. State (px, py, vx, vy); action in [-1, 1]^2; dt=0.1; goal at
// (0.5, 0.5). Reward = -(|p - goal|^2 + 0.001 |u|^2) at the pre-step state.
// Initial position uniform in the unit square, initial velocity zero.
class PointMassEnv final : public Env {
 public:
  PointMassEnv();
  const EnvSpec& spec() const override { return spec_; }
  Eigen::VectorXd reset(Rng& rng) override;
  StepResult step(const Eigen::VectorXd& action) override;
  void set_state(const Eigen::Vector2d& position, const Eigen::Vector2d& velocity);

 private:
  Eigen::VectorXd observation() const;
  EnvSpec spec_;
  Eigen::Vector2d position_{0.0, 0.0};
  Eigen::Vector2d velocity_{0.0, 0.0};
  int steps_ = 0;
  bool started_ = false;
};

// K independent double integrators with a summed per-dimension quadratic
// cost, 100-step episodes. Every dimension has identical dynamics and
// reward contribution, so instances differ only in action dimension.
// State layout [p_0..p_{K-1}, v_0..v_{K-1}]; action in [-1, 1]^K; dt=0.1.
// Reward = -sum_k (p_k^2 + 0.1 v_k^2 + 0.001 u_k^2) at the pre-step state.
// Initial positions uniform in [-1, 1] per dimension, velocities zero.
class SynthEnv final : public Env {
 public:
  explicit SynthEnv(int action_dims);
  const EnvSpec& spec() const override { return spec_; }
  Eigen::VectorXd reset(Rng& rng) override;
  StepResult step(const Eigen::VectorXd& action) override;
  void set_state(const Eigen::VectorXd& positions, const Eigen::VectorXd& velocities);

 private:
  Eigen::VectorXd observation() const;
  EnvSpec spec_;
  Eigen::VectorXd positions_;
  Eigen::VectorXd velocities_;
  int steps_ = 0;
  bool started_ = false;
};

// Environment ids: "pendulum", "pointmass", "synth-K" with K in 1..32
// (e.g. "synth-4"). Throws std::invalid_argument for unknown ids.
std::unique_ptr<Env> make_env(const std::string& id);

}  // namespace amber

#endif  // AMBER_ENV_HPP_
