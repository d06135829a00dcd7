#ifndef AMBER_METRICS_HPP_
#define AMBER_METRICS_HPP_

#include <deque>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "amber/config.hpp"

namespace amber {

inline constexpr int kMetricsSchemaVersion = 1;

// One row of the per-iteration metrics file.
struct IterationRecord {
  long iteration = 0;
  long global_step = 0;
  double mean_return_100 = 0.0;  // mean return of the last 100 completed episodes
  double mean_return_all = 0.0;  // mean return over all completed episodes
  long episodes_completed = 0;
  double beta = 0.0;             // scheduled step size
  double eps = 0.0;              // scheduled clipping factor
  double eps_b = 0.0;            // scheduled batch drop factor
  int n_active = 0;
  double avg_is = 0.0;           // mean of 1 + |1 - R| over this iteration's samples
  double surrogate = 0.0;
  double value_loss = 0.0;
  double objective = 0.0;
  std::vector<double> r_prime;   // R' per stored batch, age 0 first
};

// Mean of 1 + |1 - R| over the given per-sample ratios.
double avg_is_diag(std::span<const double> ratios);

// Min-max score over the compared set; throws on a degenerate range.
double normalized_score(double raw, double task_min, double task_max);

// Tracks completed episode returns; partial episodes do not count.
class ReturnTracker {
 public:
  void on_episode_end(double episode_return);
  double mean_last_100() const;  // 0 until the first episode completes
  double mean_all() const;
  long completed() const { return completed_; }

 private:
  std::deque<double> last_;
  double total_ = 0.0;
  long completed_ = 0;
};

std::string record_header();
std::string record_to_csv(const IterationRecord& record);
IterationRecord record_from_csv(const std::string& line);  // throws on malformed rows

// CSV sink; writes the header exactly once and flushes per record.
class MetricsWriter {
 public:
  explicit MetricsWriter(std::ostream& out) : out_(out) {}
  void write(const IterationRecord& record);

 private:
  std::ostream& out_;
  bool header_written_ = false;
};

// Run manifest: schema versions plus the full configuration, key=value.
void write_manifest(std::ostream& out, const TrainConfig& config);

// Sweep scoring. Raw per-cell scores normalize per task over every compared
// (config, seed) cell; a config's ANS is the unweighted task mean of its
// seed-averaged normalized scores.
struct ScoreRow {
  std::string task;
  std::string config_label;
  uint64_t seed = 0;
  bool ok = false;
  double final100 = 0.0;   // mean return of the final 100 episodes
  double all_mean = 0.0;   // mean return over all episodes
};

struct AnsRow {
  std::string config_label;
  double final_ans = 0.0;
  double speed_ans = 0.0;
  int cells = 0;
};

// Sorted by final_ans descending. Throws if a task's scores are degenerate.
std::vector<AnsRow> compute_ans(const std::vector<ScoreRow>& rows);

}  // namespace amber

#endif  // AMBER_METRICS_HPP_
