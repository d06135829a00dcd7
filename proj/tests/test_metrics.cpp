#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "amber/metrics.hpp"

using namespace amber;

TEST_CASE("avg_is_diag arithmetic") {
  const std::array<double, 2> flat = {1.0, 1.0};
  CHECK(avg_is_diag(flat) == 1.0);
  const std::array<double, 2> mixed = {0.8, 1.2};
  CHECK(avg_is_diag(mixed) == doctest::Approx(1.2).epsilon(1e-15));
  const std::array<double, 3> any = {0.1, 2.0, 0.97};
  CHECK(avg_is_diag(any) >= 1.0);
}

TEST_CASE("normalized score endpoints and midpoint") {
  CHECK(normalized_score(10.0, -5.0, 10.0) == 1.0);
  CHECK(normalized_score(-5.0, -5.0, 10.0) == 0.0);
  CHECK(normalized_score(2.5, -5.0, 10.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(normalized_score(1.0, 3.0, 3.0), std::invalid_argument);
}

TEST_CASE("return tracker counts only completed episodes") {
  ReturnTracker tracker;
  CHECK(tracker.completed() == 0);
  CHECK(tracker.mean_last_100() == 0.0);
  tracker.on_episode_end(10.0);
  tracker.on_episode_end(-4.0);
  CHECK(tracker.completed() == 2);
  CHECK(tracker.mean_last_100() == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(tracker.mean_all() == doctest::Approx(3.0).epsilon(1e-15));
  // Only the last 100 survive in the windowed mean.
  for (int i = 0; i < 100; ++i) tracker.on_episode_end(1.0);
  CHECK(tracker.mean_last_100() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(tracker.completed() == 102);
}

namespace {

IterationRecord sample_record() {
  IterationRecord r;
  r.iteration = 7;
  r.global_step = 14336;
  r.mean_return_100 = -123.456789012345;
  r.mean_return_all = -150.5;
  r.episodes_completed = 42;
  r.beta = 2.5e-4;
  r.eps = 0.35;
  r.eps_b = 0.2;
  r.n_active = 3;
  r.avg_is = 1.0625;
  r.surrogate = 0.0123;
  r.value_loss = 17.25;
  r.objective = -17.2377;
  r.r_prime = {1.0, 1.125, 1.3};
  return r;
}

}  // namespace

TEST_CASE("records round-trip through the csv schema") {
  const IterationRecord r = sample_record();
  const IterationRecord parsed = record_from_csv(record_to_csv(r));
  CHECK(parsed.iteration == r.iteration);
  CHECK(parsed.global_step == r.global_step);
  CHECK(parsed.mean_return_100 == r.mean_return_100);
  CHECK(parsed.mean_return_all == r.mean_return_all);
  CHECK(parsed.episodes_completed == r.episodes_completed);
  CHECK(parsed.beta == r.beta);
  CHECK(parsed.eps == r.eps);
  CHECK(parsed.eps_b == r.eps_b);
  CHECK(parsed.n_active == r.n_active);
  CHECK(parsed.avg_is == r.avg_is);
  CHECK(parsed.surrogate == r.surrogate);
  CHECK(parsed.value_loss == r.value_loss);
  CHECK(parsed.objective == r.objective);
  CHECK(parsed.r_prime == r.r_prime);
}

TEST_CASE("infinities survive the round trip") {
  IterationRecord r = sample_record();
  r.eps_b = std::numeric_limits<double>::infinity();
  const IterationRecord parsed = record_from_csv(record_to_csv(r));
  CHECK(std::isinf(parsed.eps_b));
  CHECK(parsed.eps_b > 0);
}

TEST_CASE("malformed rows are rejected") {
  CHECK_THROWS_AS(record_from_csv("1,2,3"), std::invalid_argument);
  CHECK_THROWS_AS(record_from_csv(record_header()), std::invalid_argument);
}

TEST_CASE("the writer emits the header exactly once and identical content twice") {
  const IterationRecord r = sample_record();
  std::ostringstream a, b;
  {
    MetricsWriter wa(a);
    wa.write(r);
    wa.write(r);
  }
  {
    MetricsWriter wb(b);
    wb.write(r);
    wb.write(r);
  }
  CHECK(a.str() == b.str());
  const std::string text = a.str();
  size_t headers = 0, pos = 0;
  while ((pos = text.find("iteration,", pos)) != std::string::npos) {
    ++headers;
    pos += 1;
  }
  CHECK(headers == 1);
}

TEST_CASE("manifest lists the full configuration") {
  TrainConfig config;
  config.seed = 99;
  config.clip = 0.3;
  std::ostringstream out;
  write_manifest(out, config);
  const std::string text = out.str();
  CHECK(text.find("manifest_version=1") != std::string::npos);
  CHECK(text.find("seed=99") != std::string::npos);
  CHECK(text.find("clip=0.3") != std::string::npos);
  CHECK(text.find("env=pendulum") != std::string::npos);
}

TEST_CASE("ans ranking over a small score table") {
  std::vector<ScoreRow> rows;
  // Two tasks, two configs, two seeds; config "a" dominates task t1 and
  // splits t2, so it must rank first.
  rows.push_back({"t1", "a", 0, true, 10.0, 5.0});
  rows.push_back({"t1", "a", 1, true, 8.0, 4.0});
  rows.push_back({"t1", "b", 0, true, 2.0, 1.0});
  rows.push_back({"t1", "b", 1, true, 0.0, 0.0});
  rows.push_back({"t2", "a", 0, true, -1.0, -2.0});
  rows.push_back({"t2", "a", 1, true, -3.0, -4.0});
  rows.push_back({"t2", "b", 0, true, -1.0, -2.0});
  rows.push_back({"t2", "b", 1, true, -3.0, -4.0});

  const std::vector<AnsRow> ans = compute_ans(rows);
  REQUIRE(ans.size() == 2);
  CHECK(ans[0].config_label == "a");
  CHECK(ans[0].final_ans > ans[1].final_ans);
  CHECK(ans[0].cells == 4);
  // Normalized scores live in [0, 1], so the ANS does too.
  for (const AnsRow& row : ans) {
    CHECK(row.final_ans >= 0.0);
    CHECK(row.final_ans <= 1.0);
    CHECK(row.speed_ans >= 0.0);
    CHECK(row.speed_ans <= 1.0);
  }
}

TEST_CASE("identical duplicated configs score identically") {
  std::vector<ScoreRow> rows;
  rows.push_back({"t1", "x", 0, true, 5.0, 2.0});
  rows.push_back({"t1", "y", 0, true, 5.0, 2.0});
  rows.push_back({"t1", "x", 1, true, 7.0, 3.0});
  rows.push_back({"t1", "y", 1, true, 7.0, 3.0});
  const std::vector<AnsRow> ans = compute_ans(rows);
  REQUIRE(ans.size() == 2);
  CHECK(ans[0].final_ans == ans[1].final_ans);
  CHECK(ans[0].speed_ans == ans[1].speed_ans);
}

TEST_CASE("failed cells are excluded from the ranking") {
  std::vector<ScoreRow> rows;
  rows.push_back({"t1", "x", 0, true, 5.0, 2.0});
  rows.push_back({"t1", "x", 1, false, 1e9, 1e9});
  rows.push_back({"t1", "y", 0, true, 4.0, 1.0});
  const std::vector<AnsRow> ans = compute_ans(rows);
  REQUIRE(ans.size() == 2);
  CHECK(ans[0].config_label == "x");
  CHECK(ans[0].cells == 1);
}
