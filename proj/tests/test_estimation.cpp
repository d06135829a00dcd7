#include <doctest.h>

#include <cmath>

#include "amber/estimation.hpp"

using namespace amber;

namespace {

// Synthetic trajectory over one-dimensional states; the value network is
// zeroed or rigged by the caller.
Trajectory make_traj(const Eigen::VectorXd& rewards, const std::vector<uint8_t>& dones,
                     const std::vector<uint8_t>& timeouts) {
  const int n = static_cast<int>(rewards.size());
  Trajectory t;
  t.states = Eigen::MatrixXd::Random(1, n);
  t.next_states = Eigen::MatrixXd::Random(1, n);
  t.actions = Eigen::MatrixXd::Zero(1, n);
  t.rewards = rewards;
  t.dones = dones;
  t.timeouts = timeouts;
  t.means = Eigen::MatrixXd::Zero(1, n);
  t.rollout_std = Eigen::VectorXd::Ones(1);
  return t;
}

ValueParams zero_value() {
  ValueParams params;
  params.value_net = Mlp::zeros(1, 1);
  return params;
}

// Value net that outputs the constant c for every state.
ValueParams constant_value(double c) {
  ValueParams params;
  params.value_net = Mlp::zeros(1, 1);
  params.value_net.b3[0] = c;
  return params;
}

// Truncated double-sum oracle: A_t = sum_l (gamma*lambda)^l d_{t+l}, cut at
// the first episode boundary at or after t and at the horizon end. Runs in
// long double so its own rounding stays far below the tolerance under test.
Eigen::VectorXd gae_oracle(const Eigen::VectorXd& deltas, const std::vector<uint8_t>& dones,
                           double gamma, double lambda) {
  const int n = static_cast<int>(deltas.size());
  Eigen::VectorXd out(n);
  for (int t = 0; t < n; ++t) {
    long double sum = 0.0L;
    long double factor = 1.0L;
    for (int l = t; l < n; ++l) {
      sum += factor * static_cast<long double>(deltas[l]);
      if (dones[l]) break;
      factor *= static_cast<long double>(gamma) * static_cast<long double>(lambda);
    }
    out[t] = static_cast<double>(sum);
  }
  return out;
}

}  // namespace

TEST_CASE("zero value function leaves deltas equal to rewards") {
  Eigen::VectorXd rewards(4);
  rewards << 1.0, -2.0, 0.5, 3.0;
  const Trajectory t = make_traj(rewards, {0, 0, 0, 1}, {0, 0, 0, 0});
  const Eigen::VectorXd deltas = compute_deltas(t, zero_value(), 0.99, false);
  CHECK((deltas - rewards).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("constant value and zero reward give deltas c(gamma - 1)") {
  const Eigen::VectorXd rewards = Eigen::VectorXd::Zero(5);
  const Trajectory t = make_traj(rewards, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0});
  const double c = 2.5, gamma = 0.9;
  const Eigen::VectorXd deltas = compute_deltas(t, constant_value(c), gamma, false);
  for (int i = 0; i < 5; ++i) {
    CHECK(deltas[i] == doctest::Approx(c * (gamma - 1.0)).epsilon(1e-14));
  }
}

TEST_CASE("terminal steps do not bootstrap") {
  Eigen::VectorXd rewards(3);
  rewards << 1.0, 2.0, 3.0;
  Trajectory t = make_traj(rewards, {0, 1, 0}, {0, 0, 0});
  t.next_states.col(1).setConstant(1e9);  // value there must not matter
  const ValueParams params = constant_value(4.0);
  const Eigen::VectorXd deltas = compute_deltas(t, params, 0.99, false);
  CHECK(deltas[1] == doctest::Approx(2.0 - 4.0).epsilon(1e-14));
  CHECK(deltas[0] == doctest::Approx(1.0 + 0.99 * 4.0 - 4.0).epsilon(1e-14));
}

TEST_CASE("timeout steps bootstrap only when configured") {
  Eigen::VectorXd rewards(2);
  rewards << 1.0, 1.0;
  const Trajectory t = make_traj(rewards, {0, 1}, {0, 1});
  const ValueParams params = constant_value(3.0);
  const Eigen::VectorXd off = compute_deltas(t, params, 0.5, false);
  const Eigen::VectorXd on = compute_deltas(t, params, 0.5, true);
  CHECK(off[1] == doctest::Approx(1.0 - 3.0).epsilon(1e-14));
  CHECK(on[1] == doctest::Approx(1.0 + 0.5 * 3.0 - 3.0).epsilon(1e-14));
  CHECK(off[0] == on[0]);
}

TEST_CASE("lambda zero collapses the estimator onto the deltas") {
  Eigen::VectorXd deltas(4);
  deltas << 0.3, -1.0, 2.0, 0.7;
  const Eigen::VectorXd adv = compute_gae(deltas, {0, 0, 0, 0}, 0.99, 0.0);
  CHECK((adv - deltas).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("two-step worked example") {
  Eigen::VectorXd deltas(2);
  deltas << 1.0, 1.0;
  const Eigen::VectorXd adv = compute_gae(deltas, {0, 0}, 0.99, 0.95);
  CHECK(adv[0] == doctest::Approx(1.9405).epsilon(1e-12));
  CHECK(adv[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("accumulation restarts after an episode boundary") {
  Eigen::VectorXd deltas(3);
  deltas << 5.0, 7.0, 11.0;
  const Eigen::VectorXd adv = compute_gae(deltas, {1, 0, 0}, 0.99, 0.95);
  CHECK(adv[0] == 5.0);
  CHECK(adv[1] == doctest::Approx(7.0 + 0.99 * 0.95 * 11.0).epsilon(1e-14));
}

TEST_CASE("recursion equals the truncated double sum") {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_index(64));
    Eigen::VectorXd deltas(n);
    std::vector<uint8_t> dones(n, 0);
    for (int i = 0; i < n; ++i) {
      deltas[i] = rng.uniform(-1.0, 1.0);
      dones[i] = rng.uniform() < 0.15 ? 1 : 0;
    }
    const double gamma = rng.uniform();
    const double lambda = rng.uniform();
    const Eigen::VectorXd rec = compute_gae(deltas, dones, gamma, lambda);
    const Eigen::VectorXd oracle = gae_oracle(deltas, dones, gamma, lambda);
    REQUIRE((rec - oracle).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
}

TEST_CASE("targets are advantages plus state values") {
  Eigen::VectorXd rewards(3);
  rewards << 1.0, 2.0, 3.0;
  const Trajectory t = make_traj(rewards, {0, 0, 1}, {0, 0, 1});
  const ValueParams params = constant_value(1.5);

  SUBCASE("zero advantages give back the values") {
    const Eigen::VectorXd targets = compute_targets(Eigen::VectorXd::Zero(3), t, params);
    for (int i = 0; i < 3; ++i) CHECK(targets[i] == doctest::Approx(1.5).epsilon(1e-14));
  }
  SUBCASE("zero value function gives back the advantages") {
    Eigen::VectorXd adv(3);
    adv << 0.1, -0.2, 0.3;
    const Eigen::VectorXd targets = compute_targets(adv, t, zero_value());
    CHECK((targets - adv).lpNorm<Eigen::Infinity>() == 0.0);
  }
}

TEST_CASE("undiscounted return-to-go at lambda=1, gamma=1, V=0") {
  Eigen::VectorXd rewards(5);
  rewards << 1.0, 2.0, 3.0, 4.0, 5.0;
  const Trajectory t = make_traj(rewards, {0, 0, 0, 0, 1}, {0, 0, 0, 0, 0});
  const ValueParams params = zero_value();
  const Eigen::VectorXd deltas = compute_deltas(t, params, 1.0, false);
  const Eigen::VectorXd adv = compute_gae(deltas, t.dones, 1.0, 1.0);
  const Eigen::VectorXd targets = compute_targets(adv, t, params);
  // Brute-force reward sums.
  for (int i = 0; i < 5; ++i) {
    double expected = 0.0;
    for (int l = i; l < 5; ++l) expected += rewards[l];
    CHECK(targets[i] == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("inconsistent trajectory lengths are rejected") {
  Eigen::VectorXd rewards(3);
  rewards << 1.0, 2.0, 3.0;
  Trajectory t = make_traj(rewards, {0, 0, 1}, {0, 0, 0});
  t.dones.pop_back();
  CHECK_THROWS_AS(compute_deltas(t, zero_value(), 0.99, false), std::invalid_argument);
}
