#ifndef AMBER_REPLAY_HPP_
#define AMBER_REPLAY_HPP_

#include <Eigen/Core>
#include <deque>
#include <vector>

#include "amber/estimation.hpp"
#include "amber/loss.hpp"
#include "amber/policy.hpp"
#include "amber/rng.hpp"

namespace amber {

// One iteration's batch: per-sample records plus the batch-level rollout
// std. Stores statistics only, never old network parameters.
struct StoredBatch {
  long iteration = 0;
  Eigen::MatrixXd states;      // (state_dim, N)
  Eigen::MatrixXd actions;     // (action_dim, N)
  Eigen::VectorXd advantages;  // (N), frozen at collection time
  Eigen::VectorXd targets;     // (N), frozen at collection time
  Eigen::MatrixXd means;       // (action_dim, N)
  Eigen::VectorXd sigma;       // (action_dim)
  bool active = true;

  int size() const { return static_cast<int>(states.cols()); }
};

StoredBatch make_stored_batch(long iteration, const Trajectory& trajectory,
                              const Eigen::VectorXd& advantages,
                              const Eigen::VectorXd& targets);

// Ring of the most recent batches, newest first by age.
class ReplayMemory {
 public:
  explicit ReplayMemory(int max_batches);

  // Requires batch.iteration to follow the newest stored iteration;
  // evicts the oldest batch beyond capacity.
  void push(StoredBatch batch);

  int size() const { return static_cast<int>(batches_.size()); }
  int max_batches() const { return max_batches_; }
  bool empty() const { return batches_.empty(); }

  // age 0 is the current batch, age size()-1 the oldest.
  const StoredBatch& by_age(int age) const { return batches_.at(age); }
  StoredBatch& by_age(int age) { return batches_.at(age); }

 private:
  int max_batches_;
  std::deque<StoredBatch> batches_;
};

// Batch-average IS weight R' = mean over samples of 1 + |1 - ratio| against
// the given (current) policy, from stored statistics only.
double batch_avg_is(const PolicyParams& policy, const StoredBatch& batch);

struct ActiveSet {
  std::vector<int> ages;         // active batch ages, ascending
  std::vector<double> r_prime;   // R' for every stored batch, by age
  int minibatch_size = 0;        // M = m_ppo * #active
};

// Evaluates R' for every stored batch, then marks each batch active
// independently: adaptive mode drops batches with R' > 1 + eps_b, otherwise
// every stored batch stays active. The current batch is never dropped.
ActiveSet select_active(ReplayMemory& memory, const PolicyParams& policy, double eps_b,
                        bool adaptive, int m_ppo);

struct SampleRef {
  int age = 0;
  int col = 0;
};

// m distinct samples drawn uniformly from the union of the active batches;
// the pool is re-armed for every call. Throws std::invalid_argument when m
// exceeds the pool.
std::vector<SampleRef> sample_minibatch(const ReplayMemory& memory,
                                        const std::vector<int>& active_ages, int m, Rng& rng);

// Contiguous segment of m samples from one active batch, ACER-style; kept
// for the episodic-mini-batch comparison only.
std::vector<SampleRef> sample_minibatch_episodic(const ReplayMemory& memory,
                                                 const std::vector<int>& active_ages, int m,
                                                 Rng& rng);

MiniBatch gather_minibatch(const ReplayMemory& memory, const std::vector<SampleRef>& refs);

}  // namespace amber

#endif  // AMBER_REPLAY_HPP_
