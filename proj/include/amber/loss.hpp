#ifndef AMBER_LOSS_HPP_
#define AMBER_LOSS_HPP_

#include <Eigen/Core>

#include "amber/policy.hpp"

namespace amber {

// Update-time view of sampled records; columns are samples. old_means and
// old_stds are the rollout-time Gaussian statistics stored with each sample.
struct MiniBatch {
  Eigen::MatrixXd states;       // (state_dim, M)
  Eigen::MatrixXd actions;      // (action_dim, M)
  Eigen::VectorXd advantages;   // (M)
  Eigen::VectorXd targets;      // (M)
  Eigen::MatrixXd old_means;    // (action_dim, M)
  Eigen::MatrixXd old_stds;     // (action_dim, M)

  int size() const { return static_cast<int>(advantages.size()); }
};

// Standardizes advantages to mean 0 and (population) std 1 within the
// mini-batch; the stored advantages stay raw, this runs at consumption.
void normalize_advantages(MiniBatch& minibatch);

double clip(double x, double eps);

// Mean over samples of min(R * A, clip(R) * A) with R evaluated against the
// stored statistics.
double surrogate(const MiniBatch& minibatch, const PolicyParams& policy, double eps);

// Mean squared error between current values and stored targets.
double value_loss(const MiniBatch& minibatch, const ValueParams& params);

struct CombinedLoss {
  double objective = 0.0;   // surrogate - c_v * value_loss
  double surrogate = 0.0;
  double value_loss = 0.0;
  Mlp mean_net_grad;
  Eigen::VectorXd log_std_grad;
  Mlp value_net_grad;
  Eigen::VectorXd ratios;   // per-sample IS ratios, for diagnostics
};

// Objective of the combined update and its exact gradient with respect to
// every policy and value parameter. Where the min selects the clipped branch
// and the ratio sits outside the clip band, the gradient through the ratio
// is zero; a ratio exactly on the boundary counts as unclipped.
// Throws std::runtime_error when a non-finite intermediate appears.
CombinedLoss combined_loss_and_grad(const MiniBatch& minibatch, const PolicyParams& policy,
                                    const ValueParams& params, double eps, double c_v);

// Objective value only; used by finite-difference oracles.
double combined_objective(const MiniBatch& minibatch, const PolicyParams& policy,
                          const ValueParams& params, double eps, double c_v);

}  // namespace amber

#endif  // AMBER_LOSS_HPP_
