#include "amber/loss.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace amber {

void normalize_advantages(MiniBatch& minibatch) {
  const double mean = minibatch.advantages.mean();
  const double var = (minibatch.advantages.array() - mean).square().mean();
  minibatch.advantages = (minibatch.advantages.array() - mean) / (std::sqrt(var) + 1e-8);
}

double clip(double x, double eps) {
  return std::max(std::min(x, 1.0 + eps), 1.0 - eps);
}

namespace {

Eigen::VectorXd is_ratios(const MiniBatch& mb, const Eigen::MatrixXd& new_means,
                          const Eigen::VectorXd& new_std) {
  const Eigen::VectorXd lp_new = log_prob_cols(new_means, new_std, mb.actions);
  const Eigen::VectorXd lp_old = log_prob_cols(mb.old_means, mb.old_stds, mb.actions);
  return (lp_new - lp_old).array().exp();
}

}  // namespace

double surrogate(const MiniBatch& minibatch, const PolicyParams& policy, double eps) {
  const Eigen::MatrixXd new_means = mlp_forward(policy.mean_net, minibatch.states);
  const Eigen::VectorXd new_std = policy.log_std.array().exp();
  const Eigen::VectorXd ratios = is_ratios(minibatch, new_means, new_std);
  double total = 0.0;
  for (int m = 0; m < minibatch.size(); ++m) {
    const double a = minibatch.advantages[m];
    total += std::min(ratios[m] * a, clip(ratios[m], eps) * a);
  }
  return total / minibatch.size();
}

double value_loss(const MiniBatch& minibatch, const ValueParams& params) {
  const Eigen::VectorXd values =
      mlp_forward(params.value_net, minibatch.states).row(0).transpose();
  return (values - minibatch.targets).squaredNorm() / minibatch.size();
}

CombinedLoss combined_loss_and_grad(const MiniBatch& mb, const PolicyParams& policy,
                                    const ValueParams& params, double eps, double c_v) {
  const int m = mb.size();
  if (m < 1) {
    throw std::invalid_argument("loss: empty mini-batch");
  }

  CombinedLoss out;

  // Policy side.
  MlpCache mean_cache;
  const Eigen::MatrixXd new_means = mlp_forward(policy.mean_net, mb.states, mean_cache);
  const Eigen::VectorXd new_std = policy.log_std.array().exp();
  out.ratios = is_ratios(mb, new_means, new_std);

  double surr_total = 0.0;
  // d surrogate / d log-prob per sample; zero where the clipped branch wins.
  Eigen::VectorXd dlp = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < m; ++i) {
    const double r = out.ratios[i];
    const double a = mb.advantages[i];
    const double unclipped = r * a;
    const double clipped = clip(r, eps) * a;
    surr_total += std::min(unclipped, clipped);
    if (!(clipped < unclipped)) {
      dlp[i] = unclipped;  // d(r*a)/d lp = r*a
    }
  }
  out.surrogate = surr_total / m;
  dlp /= m;

  // Backprop through the Gaussian log density into mean and log_std.
  const Eigen::ArrayXXd z = (mb.actions - new_means).array().colwise() / new_std.array();
  const Eigen::MatrixXd d_means =
      ((z.colwise() / new_std.array()).rowwise() * dlp.transpose().array()).matrix();
  out.log_std_grad =
      ((z.square() - 1.0).rowwise() * dlp.transpose().array()).rowwise().sum().matrix();
  out.mean_net_grad = mlp_backward(policy.mean_net, mean_cache, d_means).grads;

  // Value side.
  MlpCache value_cache;
  const Eigen::VectorXd values =
      mlp_forward(params.value_net, mb.states, value_cache).row(0).transpose();
  const Eigen::VectorXd verr = values - mb.targets;
  out.value_loss = verr.squaredNorm() / m;
  // objective = surrogate - c_v * value_loss.
  const Eigen::MatrixXd d_values = (-c_v * 2.0 / m) * verr.transpose();
  out.value_net_grad = mlp_backward(params.value_net, value_cache, d_values).grads;

  out.objective = out.surrogate - c_v * out.value_loss;
  if (!std::isfinite(out.objective) || !out.ratios.allFinite()) {
    int bad = 0;
    for (int i = 0; i < m; ++i) {
      if (!std::isfinite(out.ratios[i])) {
        bad = i;
        break;
      }
    }
    throw std::runtime_error(
        "loss: non-finite intermediate (sample " + std::to_string(bad) +
        ", ratio=" + std::to_string(out.ratios[bad]) +
        ", advantage=" + std::to_string(mb.advantages[bad]) + ")");
  }
  return out;
}

double combined_objective(const MiniBatch& minibatch, const PolicyParams& policy,
                          const ValueParams& params, double eps, double c_v) {
  return surrogate(minibatch, policy, eps) - c_v * value_loss(minibatch, params);
}

}  // namespace amber
