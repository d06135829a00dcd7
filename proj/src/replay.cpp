#include "amber/replay.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace amber {

StoredBatch make_stored_batch(long iteration, const Trajectory& trajectory,
                              const Eigen::VectorXd& advantages,
                              const Eigen::VectorXd& targets) {
  if (advantages.size() != trajectory.rewards.size() ||
      targets.size() != trajectory.rewards.size()) {
    throw std::invalid_argument("stored batch: estimate length mismatch");
  }
  if (!advantages.allFinite() || !targets.allFinite()) {
    throw std::invalid_argument("stored batch: non-finite estimates");
  }
  StoredBatch batch;
  batch.iteration = iteration;
  batch.states = trajectory.states;
  batch.actions = trajectory.actions;
  batch.advantages = advantages;
  batch.targets = targets;
  batch.means = trajectory.means;
  batch.sigma = trajectory.rollout_std;
  return batch;
}

ReplayMemory::ReplayMemory(int max_batches) : max_batches_(max_batches) {
  if (max_batches < 1) {
    throw std::invalid_argument("replay: capacity must be at least 1");
  }
}

void ReplayMemory::push(StoredBatch batch) {
  if (!batches_.empty() && batch.iteration != batches_.front().iteration + 1) {
    throw std::invalid_argument("replay: batch iteration " + std::to_string(batch.iteration) +
                                " does not follow " +
                                std::to_string(batches_.front().iteration));
  }
  batches_.push_front(std::move(batch));
  if (static_cast<int>(batches_.size()) > max_batches_) {
    batches_.pop_back();
  }
}

double batch_avg_is(const PolicyParams& policy, const StoredBatch& batch) {
  // Means are recomputed one state at a time through the same code path the
  // rollout used, so an unchanged policy reproduces the stored means
  // bit-exactly and every ratio is exactly 1.
  const Eigen::VectorXd current_std = policy.log_std.array().exp();
  GaussianStats current;
  current.std = current_std;
  GaussianStats stored;
  stored.std = batch.sigma;
  double total = 0.0;
  for (int n = 0; n < batch.size(); ++n) {
    current.mean = mlp_forward(policy.mean_net, Eigen::VectorXd(batch.states.col(n)));
    stored.mean = batch.means.col(n);
    const Eigen::VectorXd action = batch.actions.col(n);
    const double ratio = std::exp(log_prob(current, action) - log_prob(stored, action));
    total += 1.0 + std::abs(1.0 - ratio);
  }
  return total / batch.size();
}

ActiveSet select_active(ReplayMemory& memory, const PolicyParams& policy, double eps_b,
                        bool adaptive, int m_ppo) {
  if (memory.empty()) {
    throw std::invalid_argument("select_active: empty replay memory");
  }
  if (eps_b < 0.0) {
    throw std::invalid_argument("select_active: eps_b must be nonnegative");
  }
  ActiveSet result;
  result.r_prime.resize(memory.size());
  for (int age = 0; age < memory.size(); ++age) {
    StoredBatch& batch = memory.by_age(age);
    result.r_prime[age] = batch_avg_is(policy, batch);
    batch.active = !adaptive || result.r_prime[age] <= 1.0 + eps_b;
    if (batch.active) {
      result.ages.push_back(age);
    }
  }
  result.minibatch_size = m_ppo * static_cast<int>(result.ages.size());
  return result;
}

std::vector<SampleRef> sample_minibatch(const ReplayMemory& memory,
                                        const std::vector<int>& active_ages, int m, Rng& rng) {
  long pool = 0;
  for (int age : active_ages) {
    pool += memory.by_age(age).size();
  }
  if (m > pool) {
    throw std::invalid_argument("sample_minibatch: requested " + std::to_string(m) +
                                " samples from a pool of " + std::to_string(pool));
  }
  std::vector<SampleRef> flat;
  flat.reserve(pool);
  for (int age : active_ages) {
    const int n = memory.by_age(age).size();
    for (int col = 0; col < n; ++col) {
      flat.push_back({age, col});
    }
  }
  // Partial Fisher-Yates: the first m entries become the draw.
  std::vector<SampleRef> out(m);
  for (int i = 0; i < m; ++i) {
    const size_t j = i + rng.uniform_index(flat.size() - i);
    std::swap(flat[i], flat[j]);
    out[i] = flat[i];
  }
  return out;
}

std::vector<SampleRef> sample_minibatch_episodic(const ReplayMemory& memory,
                                                 const std::vector<int>& active_ages, int m,
                                                 Rng& rng) {
  if (active_ages.empty()) {
    throw std::invalid_argument("sample_minibatch: no active batches");
  }
  const int age = active_ages[rng.uniform_index(active_ages.size())];
  const int n = memory.by_age(age).size();
  if (m > n) {
    throw std::invalid_argument("sample_minibatch: segment longer than batch");
  }
  const int start = static_cast<int>(rng.uniform_index(n - m + 1));
  std::vector<SampleRef> out(m);
  for (int i = 0; i < m; ++i) {
    out[i] = {age, start + i};
  }
  return out;
}

MiniBatch gather_minibatch(const ReplayMemory& memory, const std::vector<SampleRef>& refs) {
  if (refs.empty()) {
    throw std::invalid_argument("gather_minibatch: empty sample set");
  }
  const StoredBatch& first = memory.by_age(refs[0].age);
  const int state_dim = static_cast<int>(first.states.rows());
  const int action_dim = static_cast<int>(first.actions.rows());
  const int m = static_cast<int>(refs.size());

  MiniBatch mb;
  mb.states.resize(state_dim, m);
  mb.actions.resize(action_dim, m);
  mb.advantages.resize(m);
  mb.targets.resize(m);
  mb.old_means.resize(action_dim, m);
  mb.old_stds.resize(action_dim, m);
  for (int i = 0; i < m; ++i) {
    const StoredBatch& batch = memory.by_age(refs[i].age);
    const int col = refs[i].col;
    mb.states.col(i) = batch.states.col(col);
    mb.actions.col(i) = batch.actions.col(col);
    mb.advantages[i] = batch.advantages[col];
    mb.targets[i] = batch.targets[col];
    mb.old_means.col(i) = batch.means.col(col);
    mb.old_stds.col(i) = batch.sigma;
  }
  return mb;
}

}  // namespace amber
