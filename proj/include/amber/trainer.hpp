#ifndef AMBER_TRAINER_HPP_
#define AMBER_TRAINER_HPP_

#include <functional>
#include <iosfwd>
#include <memory>

#include "amber/config.hpp"
#include "amber/env.hpp"
#include "amber/estimation.hpp"
#include "amber/metrics.hpp"
#include "amber/net.hpp"
#include "amber/policy.hpp"
#include "amber/replay.hpp"
#include "amber/rng.hpp"

namespace amber {

// Linear decay from the initial value to zero over total_steps, floored at
// zero; an infinite initial value stays infinite until the very end.
double schedule(double initial, long global_step, long total_steps);

// Single-threaded training loop: collect a horizon, freeze advantage and
// target estimates, store the batch, re-weigh stored batches against the
// current policy, then run the scheduled mini-batch updates. A full run is
// a pure function of the configuration (seed included).
class Trainer {
 public:
  explicit Trainer(const TrainConfig& config);

  // Exactly horizon steps under the current policy; episodes continue
  // across iteration boundaries.
  Trajectory collect_rollout();

  IterationRecord run_iteration();

  // total_steps / horizon iterations; sink receives one record each.
  void train(const std::function<void(const IterationRecord&)>& sink);

  void save_params(std::ostream& out) const;

  const TrainConfig& config() const { return cfg_; }
  const PolicyParams& policy() const { return policy_; }
  const ValueParams& value_params() const { return value_; }
  const ReplayMemory& memory() const { return memory_; }
  const ReturnTracker& returns() const { return tracker_; }
  long global_step() const { return global_step_; }
  long iteration() const { return iteration_; }
  long update_count() const { return update_count_; }

 private:
  void apply_update(const MiniBatch& minibatch, double beta, double eps);

  TrainConfig cfg_;
  std::unique_ptr<Env> env_;
  Rng rng_;
  PolicyParams policy_;
  ValueParams value_;
  AdamState adam_;
  ReplayMemory memory_;
  ReturnTracker tracker_;

  Eigen::VectorXd current_state_;
  bool episode_active_ = false;
  double episode_return_ = 0.0;
  int episode_steps_ = 0;

  long global_step_ = 0;
  long iteration_ = 0;
  long update_count_ = 0;

  // Per-iteration accumulators for the metrics record.
  double iter_dev_sum_ = 0.0;
  long iter_sample_count_ = 0;
  double iter_surrogate_sum_ = 0.0;
  double iter_vloss_sum_ = 0.0;
  double iter_objective_sum_ = 0.0;
  long iter_update_count_ = 0;
};

}  // namespace amber

#endif  // AMBER_TRAINER_HPP_
