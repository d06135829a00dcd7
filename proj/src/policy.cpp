#include "amber/policy.hpp"

#include <cmath>
#include <stdexcept>

namespace amber {

namespace {
constexpr double kLogTwoPi = 1.8378770664093454836;  // log(2*pi)
}

PolicyParams make_policy(int state_dim, int action_dim, Rng& rng) {
  PolicyParams policy;
  policy.mean_net = make_mlp(state_dim, action_dim, 0.01, rng);
  policy.log_std = Eigen::VectorXd::Zero(action_dim);
  return policy;
}

ValueParams make_value(int state_dim, Rng& rng) {
  ValueParams params;
  params.value_net = make_mlp(state_dim, 1, 1.0, rng);
  return params;
}

GaussianStats policy_stats(const PolicyParams& policy, const Eigen::VectorXd& state) {
  GaussianStats stats;
  stats.mean = mlp_forward(policy.mean_net, state);
  stats.std = policy.log_std.array().exp();
  return stats;
}

Eigen::VectorXd sample_action(const GaussianStats& stats, Rng& rng) {
  Eigen::VectorXd action(stats.mean.size());
  for (Eigen::Index k = 0; k < action.size(); ++k) {
    action[k] = stats.mean[k] + stats.std[k] * rng.normal();
  }
  return action;
}

double log_prob(const GaussianStats& stats, const Eigen::VectorXd& action) {
  if (action.size() != stats.mean.size()) {
    throw std::invalid_argument("log_prob: action dimension mismatch");
  }
  double lp = 0.0;
  for (Eigen::Index k = 0; k < action.size(); ++k) {
    const double z = (action[k] - stats.mean[k]) / stats.std[k];
    lp += -0.5 * kLogTwoPi - std::log(stats.std[k]) - 0.5 * z * z;
  }
  return lp;
}

void log_prob_grad(const GaussianStats& stats, const Eigen::VectorXd& action,
                   Eigen::VectorXd& d_mean, Eigen::VectorXd& d_log_std) {
  const Eigen::ArrayXd z = (action - stats.mean).array() / stats.std.array();
  d_mean = (z / stats.std.array()).matrix();
  d_log_std = (z.square() - 1.0).matrix();
}

double is_ratio(const PolicyParams& policy, const GaussianStats& stored,
                const Eigen::VectorXd& state, const Eigen::VectorXd& action) {
  const GaussianStats current = policy_stats(policy, state);
  return std::exp(log_prob(current, action) - log_prob(stored, action));
}

double value(const ValueParams& params, const Eigen::VectorXd& state) {
  return mlp_forward(params.value_net, state)[0];
}

Eigen::VectorXd log_prob_cols(const Eigen::MatrixXd& means, const Eigen::MatrixXd& stds,
                              const Eigen::MatrixXd& actions) {
  const Eigen::ArrayXXd z = (actions - means).array() / stds.array();
  const double base = -0.5 * kLogTwoPi * static_cast<double>(means.rows());
  return (base - stds.array().log().colwise().sum() - 0.5 * z.square().colwise().sum())
      .matrix()
      .transpose();
}

Eigen::VectorXd log_prob_cols(const Eigen::MatrixXd& means, const Eigen::VectorXd& std,
                              const Eigen::MatrixXd& actions) {
  const Eigen::ArrayXXd z = (actions - means).array().colwise() / std.array();
  const double base = -0.5 * kLogTwoPi * static_cast<double>(means.rows()) -
                      std.array().log().sum();
  return (base - 0.5 * z.square().colwise().sum()).matrix().transpose();
}

Eigen::VectorXd policy_to_flat(const PolicyParams& policy) {
  Eigen::VectorXd flat(policy.param_count());
  flat.head(policy.mean_net.param_count()) = mlp_to_flat(policy.mean_net);
  flat.tail(policy.action_dim()) = policy.log_std;
  return flat;
}

void policy_from_flat(PolicyParams& policy, const Eigen::Ref<const Eigen::VectorXd>& flat) {
  if (flat.size() != policy.param_count()) {
    throw std::invalid_argument("policy: flat parameter size mismatch");
  }
  mlp_from_flat(policy.mean_net, flat.head(policy.mean_net.param_count()));
  policy.log_std = flat.tail(policy.action_dim());
}

Eigen::VectorXd value_to_flat(const ValueParams& params) {
  return mlp_to_flat(params.value_net);
}

void value_from_flat(ValueParams& params, const Eigen::Ref<const Eigen::VectorXd>& flat) {
  mlp_from_flat(params.value_net, flat);
}

}  // namespace amber
