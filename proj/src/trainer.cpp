#include "amber/trainer.hpp"

#include <cassert>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace amber {

double schedule(double initial, long global_step, long total_steps) {
  const double frac =
      std::max(0.0, 1.0 - static_cast<double>(global_step) / static_cast<double>(total_steps));
  return frac == 0.0 ? 0.0 : initial * frac;
}

Trainer::Trainer(const TrainConfig& config)
    : cfg_(config),
      env_(nullptr),
      rng_(config.seed),
      adam_(0),
      memory_(config.replay_length) {
  cfg_.validate();
  env_ = make_env(cfg_.env);
  const EnvSpec& spec = env_->spec();
  policy_ = make_policy(spec.state_dim, spec.action_dim, rng_);
  value_ = make_value(spec.state_dim, rng_);
  adam_ = AdamState(policy_.param_count() + value_.param_count());
}

Trajectory Trainer::collect_rollout() {
  const EnvSpec& spec = env_->spec();
  const int n = cfg_.horizon;

  Trajectory traj;
  traj.states.resize(spec.state_dim, n);
  traj.next_states.resize(spec.state_dim, n);
  traj.actions.resize(spec.action_dim, n);
  traj.rewards.resize(n);
  traj.dones.assign(n, 0);
  traj.timeouts.assign(n, 0);
  traj.means.resize(spec.action_dim, n);
  traj.rollout_std = policy_.log_std.array().exp();

  for (int t = 0; t < n; ++t) {
    if (!episode_active_) {
      current_state_ = env_->reset(rng_);
      episode_active_ = true;
      episode_return_ = 0.0;
      episode_steps_ = 0;
    }
    const GaussianStats stats = policy_stats(policy_, current_state_);
    const Eigen::VectorXd action = sample_action(stats, rng_);
    const StepResult result = env_->step(action);

    traj.states.col(t) = current_state_;
    traj.next_states.col(t) = result.next_state;
    traj.actions.col(t) = action;
    traj.rewards[t] = result.reward;
    traj.means.col(t) = stats.mean;

    episode_return_ += result.reward;
    ++episode_steps_;
    if (result.done) {
      traj.dones[t] = 1;
      traj.timeouts[t] = episode_steps_ >= spec.max_episode_steps ? 1 : 0;
      tracker_.on_episode_end(episode_return_);
      episode_active_ = false;
    } else {
      current_state_ = result.next_state;
    }
  }
  global_step_ += n;
  return traj;
}

void Trainer::apply_update(const MiniBatch& minibatch, double beta, double eps) {
  const CombinedLoss loss = combined_loss_and_grad(minibatch, policy_, value_, eps, cfg_.c_v);

  // Gradient ascent on the combined objective, realized as an Adam descent
  // step on its negation. This is the only place the sign convention lives.
  const int pn = policy_.param_count();
  const int vn = value_.param_count();
  Eigen::VectorXd grad(pn + vn);
  grad.head(pn - policy_.action_dim()) = -mlp_to_flat(loss.mean_net_grad);
  grad.segment(pn - policy_.action_dim(), policy_.action_dim()) = -loss.log_std_grad;
  grad.tail(vn) = -mlp_to_flat(loss.value_net_grad);

  Eigen::VectorXd params(pn + vn);
  params.head(pn) = policy_to_flat(policy_);
  params.tail(vn) = value_to_flat(value_);
  adam_step(adam_, params, grad, beta);
  policy_from_flat(policy_, params.head(pn));
  value_from_flat(value_, params.tail(vn));

  ++update_count_;
  ++iter_update_count_;
  iter_surrogate_sum_ += loss.surrogate;
  iter_vloss_sum_ += loss.value_loss;
  iter_objective_sum_ += loss.objective;
  for (int i = 0; i < loss.ratios.size(); ++i) {
    iter_dev_sum_ += 1.0 + std::abs(1.0 - loss.ratios[i]);
  }
  iter_sample_count_ += loss.ratios.size();
}

IterationRecord Trainer::run_iteration() {
  const double beta = schedule(cfg_.step_size, global_step_, cfg_.total_steps);
  const double eps = schedule(cfg_.clip, global_step_, cfg_.total_steps);
  const double eps_b = schedule(cfg_.batch_drop, global_step_, cfg_.total_steps);

  Trajectory traj = collect_rollout();
  const Eigen::VectorXd deltas =
      compute_deltas(traj, value_, cfg_.gamma, cfg_.bootstrap_on_timeout);
  const Eigen::VectorXd advantages = compute_gae(deltas, traj.dones, cfg_.gamma, cfg_.lambda);
  const Eigen::VectorXd targets = compute_targets(advantages, traj, value_);

  ++iteration_;
  memory_.push(make_stored_batch(iteration_, traj, advantages, targets));

  const ActiveSet active = select_active(memory_, policy_, eps_b, cfg_.adaptive, cfg_.minibatch);
  const int m = cfg_.fixed_minibatch ? cfg_.minibatch : active.minibatch_size;
  long pool = 0;
  for (int age : active.ages) pool += memory_.by_age(age).size();
  // M = M_PPO * #active and every batch holds horizon >= M_PPO samples, so
  // the pool always covers one mini-batch.
  assert(pool >= m);
  const long updates_per_epoch = pool / m;

  iter_dev_sum_ = 0.0;
  iter_sample_count_ = 0;
  iter_surrogate_sum_ = 0.0;
  iter_vloss_sum_ = 0.0;
  iter_objective_sum_ = 0.0;
  iter_update_count_ = 0;

  for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
    for (long j = 0; j < updates_per_epoch; ++j) {
      const std::vector<SampleRef> refs =
          cfg_.episodic_minibatch ? sample_minibatch_episodic(memory_, active.ages, m, rng_)
                                  : sample_minibatch(memory_, active.ages, m, rng_);
      MiniBatch minibatch = gather_minibatch(memory_, refs);
      if (cfg_.normalize_advantages) {
        normalize_advantages(minibatch);
      }
      apply_update(minibatch, beta, eps);
    }
  }

  IterationRecord record;
  record.iteration = iteration_;
  record.global_step = global_step_;
  record.mean_return_100 = tracker_.mean_last_100();
  record.mean_return_all = tracker_.mean_all();
  record.episodes_completed = tracker_.completed();
  record.beta = beta;
  record.eps = eps;
  record.eps_b = eps_b;
  record.n_active = static_cast<int>(active.ages.size());
  record.avg_is = iter_sample_count_ > 0
                      ? iter_dev_sum_ / static_cast<double>(iter_sample_count_)
                      : 0.0;
  record.surrogate = iter_surrogate_sum_ / iter_update_count_;
  record.value_loss = iter_vloss_sum_ / iter_update_count_;
  record.objective = iter_objective_sum_ / iter_update_count_;
  record.r_prime = active.r_prime;
  return record;
}

void Trainer::train(const std::function<void(const IterationRecord&)>& sink) {
  while (global_step_ < cfg_.total_steps) {
    const IterationRecord record = run_iteration();
    if (sink) sink(record);
  }
}

void Trainer::save_params(std::ostream& out) const {
  NamedArrays arrays;
  arrays.emplace_back("policy.mean_net", mlp_to_flat(policy_.mean_net));
  arrays.emplace_back("policy.log_std", policy_.log_std);
  arrays.emplace_back("value.value_net", mlp_to_flat(value_.value_net));
  save_named_arrays(out, arrays);
}

}  // namespace amber
