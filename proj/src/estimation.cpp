#include "amber/estimation.hpp"

#include <stdexcept>

namespace amber {

namespace {

void check_trajectory(const Trajectory& t) {
  const int n = t.length();
  if (t.states.cols() != n || t.next_states.cols() != n || t.actions.cols() != n ||
      static_cast<int>(t.dones.size()) != n || static_cast<int>(t.timeouts.size()) != n) {
    throw std::invalid_argument("trajectory: inconsistent sequence lengths");
  }
}

}  // namespace

Eigen::VectorXd compute_deltas(const Trajectory& trajectory, const ValueParams& params,
                               double gamma, bool bootstrap_on_timeout) {
  check_trajectory(trajectory);
  const int n = trajectory.length();
  const Eigen::VectorXd values =
      mlp_forward(params.value_net, trajectory.states).row(0).transpose();
  const Eigen::VectorXd next_values =
      mlp_forward(params.value_net, trajectory.next_states).row(0).transpose();

  Eigen::VectorXd deltas(n);
  for (int t = 0; t < n; ++t) {
    const bool bootstrap =
        !trajectory.dones[t] || (trajectory.timeouts[t] && bootstrap_on_timeout);
    deltas[t] = trajectory.rewards[t] + (bootstrap ? gamma * next_values[t] : 0.0) - values[t];
  }
  return deltas;
}

Eigen::VectorXd compute_gae(const Eigen::VectorXd& deltas, const std::vector<uint8_t>& dones,
                            double gamma, double lambda) {
  if (static_cast<size_t>(deltas.size()) != dones.size()) {
    throw std::invalid_argument("gae: deltas/dones length mismatch");
  }
  const int n = static_cast<int>(deltas.size());
  Eigen::VectorXd advantages(n);
  double tail = 0.0;
  for (int t = n - 1; t >= 0; --t) {
    tail = deltas[t] + (dones[t] ? 0.0 : gamma * lambda * tail);
    advantages[t] = tail;
  }
  return advantages;
}

Eigen::VectorXd compute_targets(const Eigen::VectorXd& advantages, const Trajectory& trajectory,
                                const ValueParams& params) {
  check_trajectory(trajectory);
  if (advantages.size() != trajectory.rewards.size()) {
    throw std::invalid_argument("targets: advantages length mismatch");
  }
  const Eigen::VectorXd values =
      mlp_forward(params.value_net, trajectory.states).row(0).transpose();
  return advantages + values;
}

}  // namespace amber
