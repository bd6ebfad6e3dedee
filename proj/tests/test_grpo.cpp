// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "egokit/grpo.hpp"

using namespace egokit;

namespace {

// Random policy and sampled group for gradient checks.
struct GradCase {
  ToyPolicy policy;
  GroupSample sample;
};

GradCase random_grad_case(std::mt19937_64& rng, std::size_t grid,
                          std::size_t group) {
  std::uniform_real_distribution<double> logit(-1.5, 1.5);
  std::uniform_real_distribution<double> reward(0.0, 2.0);

  GradCase c;
  for (std::size_t k = 0; k < grid; ++k) c.policy.logits.push_back(logit(rng));
  const std::vector<double> lp = c.policy.log_probs();
  for (std::size_t i = 0; i < group; ++i) {
    const int a = static_cast<int>(rng() % grid);
    c.sample.actions.push_back(a);
    c.sample.rewards.push_back(reward(rng));
    // Detached snapshot and reference near, but not equal to, the policy.
    c.sample.logp_old.push_back(lp[static_cast<std::size_t>(a)] +
                                0.05 * logit(rng));
    c.sample.logp_ref.push_back(lp[static_cast<std::size_t>(a)] +
                                0.05 * logit(rng));
  }
  return c;
}

}  // namespace

TEST_CASE("advantages standardize with the population std") {
  const auto two = normalize_advantages({1.0, 0.0});
  REQUIRE(two.size() == 2);
  CHECK(two[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(two[1] == doctest::Approx(-1.0).epsilon(1e-12));

  const auto three = normalize_advantages({2.0, 1.0, 0.0});
  REQUIRE(three.size() == 3);
  CHECK(three[0] == doctest::Approx(1.224744871391589).epsilon(1e-12));
  CHECK(three[1] == doctest::Approx(0.0));
  CHECK(three[2] == doctest::Approx(-1.224744871391589).epsilon(1e-12));

  CHECK_THROWS_AS(normalize_advantages({1.0}), Error);
}

TEST_CASE("advantage properties: zero mean, unit std, affine invariance") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> reward(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 15;
    std::vector<double> rewards;
    for (std::size_t i = 0; i < n; ++i) rewards.push_back(reward(rng));

    const auto adv = normalize_advantages(rewards);
    double mean = 0.0;
    double var = 0.0;
    for (double a : adv) mean += a;
    mean /= static_cast<double>(n);
    for (double a : adv) var += (a - mean) * (a - mean);
    var /= static_cast<double>(n);

    const bool degenerate =
        *std::max_element(rewards.begin(), rewards.end()) -
            *std::min_element(rewards.begin(), rewards.end()) <
        1e-12;
    if (degenerate) continue;
    CHECK(std::abs(mean) < 1e-9);
    CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-9);

    // Shifting and positively scaling rewards changes nothing.
    std::vector<double> moved;
    for (double r : rewards) moved.push_back(3.0 * r + 7.0);
    const auto adv2 = normalize_advantages(moved);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(adv[i] == doctest::Approx(adv2[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("a degenerate group gets all-zero advantages") {
  const auto flat = normalize_advantages({1.5, 1.5, 1.5, 1.5});
  for (double a : flat) CHECK(a == 0.0);

  // Just under the epsilon floor also counts as degenerate.
  const auto tiny = normalize_advantages({1.0, 1.0 + 1e-12}, 1e-8);
  for (double a : tiny) CHECK(a == 0.0);
}

TEST_CASE("per-sample kl estimator matches its closed form and stays nonnegative") {
  // d = ln 2: exp(d) - d - 1.
  const double v = kl_estimate({std::log(0.25)}, {std::log(0.5)});
  CHECK(v == doctest::Approx(0.3068528194400546).epsilon(1e-12));

  CHECK(kl_estimate({std::log(0.3), std::log(0.7)},
                    {std::log(0.3), std::log(0.7)}) == 0.0);

  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> lp(-4.0, -0.1);
  for (int i = 0; i < 200; ++i) {
    const std::vector<double> a = {lp(rng), lp(rng), lp(rng)};
    const std::vector<double> b = {lp(rng), lp(rng), lp(rng)};
    CHECK(kl_estimate(a, b) >= 0.0);
  }
  CHECK_THROWS_AS(kl_estimate({-1.0}, {-1.0, -2.0}), Error);
}

TEST_CASE("exact kl on known distributions") {
  const std::vector<double> p = {std::log(0.75), std::log(0.25)};
  const std::vector<double> q = {std::log(0.5), std::log(0.5)};
  CHECK(kl_exact(p, q) ==
        doctest::Approx(0.13081203594113697).epsilon(1e-12));
  CHECK(kl_exact(q, q) == doctest::Approx(0.0));
}

TEST_CASE("objective is zero when nothing moved") {
  PolicyGroup group;
  group.rewards = {1.0, 0.0};
  group.logp_new = {std::log(0.5), std::log(0.25)};
  group.logp_old = group.logp_new;
  group.logp_ref = group.logp_new;
  // Ratios are 1, advantages sum to zero, and the kl estimate vanishes.
  CHECK(grpo_objective(group, 0.04) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("objective matches a hand-computed group") {
  PolicyGroup group;
  group.rewards = {1.0, 0.0};
  group.logp_old = {std::log(0.5), std::log(0.25)};
  group.logp_new = {std::log(0.6), std::log(0.2)};
  group.logp_ref = group.logp_old;

  CHECK(grpo_objective(group, 0.04) ==
        doctest::Approx(0.39914977322373835).epsilon(1e-10));
  // With beta 0 only the clipped-free surrogate remains.
  CHECK(grpo_objective(group, 0.0) ==
        doctest::Approx(0.3999999999999999).epsilon(1e-10));
}

TEST_CASE("group validation rejects bad shapes and values") {
  PolicyGroup group;
  group.rewards = {1.0};
  group.logp_new = {0.0};
  group.logp_old = {0.0};
  group.logp_ref = {0.0};
  CHECK_THROWS_AS(group.validate(), Error);

  group.rewards = {1.0, 2.0};
  CHECK_THROWS_AS(group.validate(), Error);  // length mismatch

  group.logp_new = {0.0, std::nan("")};
  group.logp_old = {0.0, 0.0};
  group.logp_ref = {0.0, 0.0};
  CHECK_THROWS_AS(group.validate(), Error);
}

TEST_CASE("softmax policy probabilities are a stable simplex point") {
  ToyPolicy policy;
  policy.logits = {1000.0, 1000.0, 999.0};
  const auto probs = policy.probs();
  double sum = 0.0;
  for (double p : probs) {
    CHECK(p > 0.0);
    sum += p;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(probs[0] == doctest::Approx(probs[1]).epsilon(1e-12));
  CHECK(probs[2] < probs[0]);
}

TEST_CASE("analytic gradient matches central finite differences") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    GradCase c = random_grad_case(rng, 6, 4);
    const double beta = trial % 2 == 0 ? 0.04 : 0.0;
    const auto grad = grpo_objective_gradient(c.policy, c.sample, beta);

    const double h = 1e-6;
    for (std::size_t k = 0; k < c.policy.logits.size(); ++k) {
      ToyPolicy plus = c.policy;
      plus.logits[k] += h;
      ToyPolicy minus = c.policy;
      minus.logits[k] -= h;
      const double fd = (grpo_objective(plus, c.sample, beta) -
                         grpo_objective(minus, c.sample, beta)) /
                        (2.0 * h);
      CHECK(grad[k] == doctest::Approx(fd).epsilon(5e-5));
    }
  }
}

TEST_CASE("bind_group rejects actions outside the grid") {
  ToyPolicy policy;
  policy.logits = {0.0, 0.0};
  GroupSample sample;
  sample.actions = {0, 5};
  sample.rewards = {1.0, 0.0};
  sample.logp_old = {-0.7, -0.7};
  sample.logp_ref = {-0.7, -0.7};
  CHECK_THROWS_AS(bind_group(policy, sample), Error);
}

TEST_CASE("toy grids have the advertised sizes and a perfect candidate") {
  const ToyTaskSpec box = make_toy_task(ToyTask::box_grounding);
  CHECK(box.responses.size() == 75);
  CHECK(box.reward_table.size() == 75);
  CHECK(*std::max_element(box.reward_table.begin(), box.reward_table.end()) ==
        2.0);
  for (double r : box.reward_table) {
    CHECK(r >= 1.0);  // every grid response is well-formed
    CHECK(r <= 2.0);
  }

  const ToyTaskSpec interval = make_toy_task(ToyTask::interval_grounding);
  CHECK(interval.responses.size() == 200);
  CHECK(*std::max_element(interval.reward_table.begin(),
                          interval.reward_table.end()) == 2.0);

  CHECK(parse_toy_task("box") == ToyTask::box_grounding);
  CHECK(parse_toy_task(to_string(ToyTask::interval_grounding)) ==
        ToyTask::interval_grounding);
  CHECK_THROWS_AS(parse_toy_task("video"), Error);
}

TEST_CASE("training is bit-deterministic for a fixed seed") {
  GrpoConfig cfg;
  cfg.iterations = 30;
  cfg.seed = 9;
  const TrainReport a = train_toy(ToyTask::box_grounding, cfg);
  const TrainReport b = train_toy(ToyTask::box_grounding, cfg);
  REQUIRE(a.curve.size() == b.curve.size());
  CHECK(a.curve == b.curve);
  CHECK(a.final_logits == b.final_logits);

  cfg.seed = 10;
  const TrainReport c = train_toy(ToyTask::box_grounding, cfg);
  CHECK(a.curve != c.curve);
}

TEST_CASE("the curve starts at the uniform policy with zero kl") {
  GrpoConfig cfg;
  cfg.iterations = 5;
  const TrainReport report = train_toy(ToyTask::interval_grounding, cfg);
  REQUIRE(report.curve.size() == 6);
  CHECK(report.curve[0].iteration == 0);
  CHECK(report.curve[0].kl == 0.0);
  CHECK(report.curve[0].objective == 0.0);

  // Uniform expected reward over the interval grid, computed directly.
  const ToyTaskSpec spec = make_toy_task(ToyTask::interval_grounding);
  double mean = 0.0;
  for (double r : spec.reward_table) mean += r;
  mean /= static_cast<double>(spec.reward_table.size());
  CHECK(report.curve[0].expected_reward == doctest::Approx(mean));
}

TEST_CASE("reward-seeking training improves expected reward without kl pull") {
  GrpoConfig cfg;
  cfg.beta = 0.0;
  cfg.iterations = 200;
  cfg.seed = 3;
  const TrainReport report = train_toy(ToyTask::box_grounding, cfg);
  CHECK(report.final_expected_reward() >
        report.initial_expected_reward() + 0.2);
}

TEST_CASE("an overwhelming kl penalty pins the policy to the reference") {
  GrpoConfig cfg;
  cfg.beta = 1000.0;
  cfg.iterations = 100;
  cfg.seed = 4;
  const TrainReport report = train_toy(ToyTask::box_grounding, cfg);
  CHECK(report.final_kl() < 0.01);
}

TEST_CASE("iteration rows round-trip through json") {
  const TrainIteration row{7, 1.25, 0.003, 0.41};
  const json j = row;
  CHECK(j.get<TrainIteration>() == row);
}

TEST_CASE("config validation") {
  GrpoConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.group_size = 1;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = GrpoConfig{};
  cfg.beta = -0.1;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = GrpoConfig{};
  cfg.learning_rate = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = GrpoConfig{};
  cfg.std_epsilon = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}
