#include "amber/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace amber {

double avg_is_diag(std::span<const double> ratios) {
  if (ratios.empty()) {
    throw std::invalid_argument("avg_is_diag: empty ratio set");
  }
  double total = 0.0;
  for (double r : ratios) {
    total += 1.0 + std::abs(1.0 - r);
  }
  return total / static_cast<double>(ratios.size());
}

double normalized_score(double raw, double task_min, double task_max) {
  if (!(task_max > task_min)) {
    throw std::invalid_argument("normalized_score: degenerate range");
  }
  return (raw - task_min) / (task_max - task_min);
}

void ReturnTracker::on_episode_end(double episode_return) {
  last_.push_back(episode_return);
  if (last_.size() > 100) last_.pop_front();
  total_ += episode_return;
  ++completed_;
}

double ReturnTracker::mean_last_100() const {
  if (last_.empty()) return 0.0;
  double sum = 0.0;
  for (double r : last_) sum += r;
  return sum / static_cast<double>(last_.size());
}

double ReturnTracker::mean_all() const {
  return completed_ == 0 ? 0.0 : total_ / static_cast<double>(completed_);
}

std::string record_header() {
  return "iteration,global_step,mean_return_100,mean_return_all,episodes_completed,"
         "beta,eps,eps_b,n_active,avg_is,surrogate,value_loss,objective,r_prime";
}

std::string record_to_csv(const IterationRecord& r) {
  std::ostringstream out;
  out << r.iteration << ',' << r.global_step << ',' << format_double(r.mean_return_100) << ','
      << format_double(r.mean_return_all) << ',' << r.episodes_completed << ','
      << format_double(r.beta) << ',' << format_double(r.eps) << ',' << format_double(r.eps_b)
      << ',' << r.n_active << ',' << format_double(r.avg_is) << ','
      << format_double(r.surrogate) << ',' << format_double(r.value_loss) << ','
      << format_double(r.objective) << ',';
  for (size_t i = 0; i < r.r_prime.size(); ++i) {
    out << (i ? ";" : "") << format_double(r.r_prime[i]);
  }
  return out.str();
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  size_t begin = 0;
  for (;;) {
    const size_t end = s.find(sep, begin);
    if (end == std::string::npos) {
      parts.push_back(s.substr(begin));
      return parts;
    }
    parts.push_back(s.substr(begin, end - begin));
    begin = end + 1;
  }
}

double to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw std::invalid_argument("metrics: bad number '" + s + "'");
  }
  return v;
}

long to_long(const std::string& s) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') {
    throw std::invalid_argument("metrics: bad integer '" + s + "'");
  }
  return v;
}

}  // namespace

IterationRecord record_from_csv(const std::string& line) {
  const std::vector<std::string> f = split(line, ',');
  if (f.size() != 14) {
    throw std::invalid_argument("metrics: expected 14 fields, got " +
                                std::to_string(f.size()));
  }
  IterationRecord r;
  r.iteration = to_long(f[0]);
  r.global_step = to_long(f[1]);
  r.mean_return_100 = to_double(f[2]);
  r.mean_return_all = to_double(f[3]);
  r.episodes_completed = to_long(f[4]);
  r.beta = to_double(f[5]);
  r.eps = to_double(f[6]);
  r.eps_b = to_double(f[7]);
  r.n_active = static_cast<int>(to_long(f[8]));
  r.avg_is = to_double(f[9]);
  r.surrogate = to_double(f[10]);
  r.value_loss = to_double(f[11]);
  r.objective = to_double(f[12]);
  if (!f[13].empty()) {
    for (const std::string& part : split(f[13], ';')) {
      r.r_prime.push_back(to_double(part));
    }
  }
  return r;
}

void MetricsWriter::write(const IterationRecord& record) {
  if (!header_written_) {
    out_ << record_header() << "\n";
    header_written_ = true;
  }
  out_ << record_to_csv(record) << "\n";
  out_.flush();
}

void write_manifest(std::ostream& out, const TrainConfig& config) {
  out << "manifest_version=1\n";
  out << "metrics_schema=" << kMetricsSchemaVersion << "\n";
  out << "score_normalization=minmax-over-compared-set\n";
  for (const auto& [key, value] : config.items()) {
    out << key << "=" << value << "\n";
  }
  out.flush();
}

std::vector<AnsRow> compute_ans(const std::vector<ScoreRow>& rows) {
  struct Range {
    double final_min = std::numeric_limits<double>::infinity();
    double final_max = -std::numeric_limits<double>::infinity();
    double all_min = std::numeric_limits<double>::infinity();
    double all_max = -std::numeric_limits<double>::infinity();
  };
  std::map<std::string, Range> ranges;
  for (const ScoreRow& row : rows) {
    if (!row.ok) continue;
    Range& range = ranges[row.task];
    range.final_min = std::min(range.final_min, row.final100);
    range.final_max = std::max(range.final_max, row.final100);
    range.all_min = std::min(range.all_min, row.all_mean);
    range.all_max = std::max(range.all_max, row.all_mean);
  }

  // config -> task -> (ns sums, count)
  struct Acc {
    double final_ns = 0.0;
    double all_ns = 0.0;
    int count = 0;
  };
  std::map<std::string, std::map<std::string, Acc>> per_config;
  for (const ScoreRow& row : rows) {
    if (!row.ok) continue;
    const Range& range = ranges[row.task];
    Acc& acc = per_config[row.config_label][row.task];
    // A task where every compared cell scored identically carries no
    // ranking information; count it as 0.5 for every cell.
    const bool final_flat = !(range.final_max > range.final_min);
    const bool all_flat = !(range.all_max > range.all_min);
    acc.final_ns +=
        final_flat ? 0.5 : normalized_score(row.final100, range.final_min, range.final_max);
    acc.all_ns += all_flat ? 0.5 : normalized_score(row.all_mean, range.all_min, range.all_max);
    acc.count += 1;
  }

  std::vector<AnsRow> result;
  for (const auto& [label, tasks] : per_config) {
    AnsRow row;
    row.config_label = label;
    for (const auto& [task, acc] : tasks) {
      row.final_ans += acc.final_ns / acc.count;
      row.speed_ans += acc.all_ns / acc.count;
      row.cells += acc.count;
    }
    row.final_ans /= static_cast<double>(tasks.size());
    row.speed_ans /= static_cast<double>(tasks.size());
    result.push_back(row);
  }
  std::sort(result.begin(), result.end(), [](const AnsRow& a, const AnsRow& b) {
    if (a.final_ans != b.final_ans) return a.final_ans > b.final_ans;
    return a.config_label < b.config_label;
  });
  return result;
}

}  // namespace amber
