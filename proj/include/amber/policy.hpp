#ifndef AMBER_POLICY_HPP_
#define AMBER_POLICY_HPP_

#include <Eigen/Core>

#include "amber/net.hpp"
#include "amber/rng.hpp"

namespace amber {

// Diagonal Gaussian policy: a state-dependent mean network plus a learned
// state-independent log standard deviation per action dimension.
struct PolicyParams {
  Mlp mean_net;                // state_dim -> action_dim
  Eigen::VectorXd log_std;     // (K)

  int state_dim() const { return mean_net.input_dim(); }
  int action_dim() const { return static_cast<int>(log_std.size()); }
  int param_count() const { return mean_net.param_count() + action_dim(); }
};

struct ValueParams {
  Mlp value_net;               // state_dim -> 1
  int param_count() const { return value_net.param_count(); }
};

// Per-state Gaussian statistics; std is stored at rollout time so that IS
// ratios never require re-running an old network.
struct GaussianStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;
};

// Mean net output gain 0.01 keeps early actions near zero and early IS
// ratios near one; log_std starts at zero (std = 1).
PolicyParams make_policy(int state_dim, int action_dim, Rng& rng);
ValueParams make_value(int state_dim, Rng& rng);

GaussianStats policy_stats(const PolicyParams& policy, const Eigen::VectorXd& state);

// a = mean + std * z with z standard normal per dimension.
Eigen::VectorXd sample_action(const GaussianStats& stats, Rng& rng);

double log_prob(const GaussianStats& stats, const Eigen::VectorXd& action);

// d log_prob / d mean and d log_prob / d log_std at a fixed action.
void log_prob_grad(const GaussianStats& stats, const Eigen::VectorXd& action,
                   Eigen::VectorXd& d_mean, Eigen::VectorXd& d_log_std);

// IS weight of (state, action) under the given parameters relative to the
// stored rollout statistics, computed in log space.
double is_ratio(const PolicyParams& policy, const GaussianStats& stored,
                const Eigen::VectorXd& state, const Eigen::VectorXd& action);

double value(const ValueParams& params, const Eigen::VectorXd& state);

// Batched log densities; columns are samples. The second overload takes one
// std vector shared by every column.
Eigen::VectorXd log_prob_cols(const Eigen::MatrixXd& means, const Eigen::MatrixXd& stds,
                              const Eigen::MatrixXd& actions);
Eigen::VectorXd log_prob_cols(const Eigen::MatrixXd& means, const Eigen::VectorXd& std,
                              const Eigen::MatrixXd& actions);

// Flat layout: [mean_net | log_std] and [value_net].
Eigen::VectorXd policy_to_flat(const PolicyParams& policy);
void policy_from_flat(PolicyParams& policy, const Eigen::Ref<const Eigen::VectorXd>& flat);
Eigen::VectorXd value_to_flat(const ValueParams& params);
void value_from_flat(ValueParams& params, const Eigen::Ref<const Eigen::VectorXd>& flat);

}  // namespace amber

#endif  // AMBER_POLICY_HPP_
