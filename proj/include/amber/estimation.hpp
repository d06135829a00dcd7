#ifndef AMBER_ESTIMATION_HPP_
#define AMBER_ESTIMATION_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "amber/policy.hpp"

namespace amber {

// One horizon of raw rollout data; columns are time steps. next_states
// holds the state that followed each step before any reset, so bootstrap
// values survive mid-horizon episode boundaries. timeouts marks dones that
// came from the episode step limit rather than a terminal condition.
struct Trajectory {
  Eigen::MatrixXd states;       // (state_dim, N)
  Eigen::MatrixXd next_states;  // (state_dim, N)
  Eigen::MatrixXd actions;      // (action_dim, N)
  Eigen::VectorXd rewards;      // (N)
  std::vector<uint8_t> dones;
  std::vector<uint8_t> timeouts;
  Eigen::MatrixXd means;        // (action_dim, N) rollout policy means
  Eigen::VectorXd rollout_std;  // (action_dim) rollout policy std, one per batch

  int length() const { return static_cast<int>(rewards.size()); }
};

// TD residuals d_t = r_t + gamma * V(s_{t+1}) - V(s_t), with the bootstrap
// term masked at terminals. Dones raised by the step limit bootstrap only
// when bootstrap_on_timeout is set.
Eigen::VectorXd compute_deltas(const Trajectory& trajectory, const ValueParams& params,
                               double gamma, bool bootstrap_on_timeout);

// Backward recursion A_t = d_t + gamma * lambda * A_{t+1}, restarting at
// episode boundaries and truncated at the horizon end.
Eigen::VectorXd compute_gae(const Eigen::VectorXd& deltas, const std::vector<uint8_t>& dones,
                            double gamma, double lambda);

// Value regression targets V^_t = A_t + V(s_t).
Eigen::VectorXd compute_targets(const Eigen::VectorXd& advantages, const Trajectory& trajectory,
                                const ValueParams& params);

}  // namespace amber

#endif  // AMBER_ESTIMATION_HPP_
