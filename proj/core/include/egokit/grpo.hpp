// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "egokit/jsonl.hpp"
#include "egokit/types.hpp"

namespace egokit {

struct GrpoConfig {
  int group_size = 8;
  double beta = 0.04;
  double learning_rate = 0.05;
  int iterations = 200;
  double std_epsilon = 1e-8;
  std::uint64_t seed = 0;

  void validate() const;
};

// N candidates for one prompt with their rewards and log-probabilities under
// the current, snapshot, and reference policies.
struct PolicyGroup {
  std::string prompt_id;
  std::vector<std::string> candidates;
  std::vector<double> rewards;
  std::vector<double> logp_new;
  std::vector<double> logp_old;
  std::vector<double> logp_ref;

  // Numeric lists must share a length N >= 2 and be finite; candidates may be
  // empty or match N.
  void validate() const;
};

// Group-standardized advantages: (r - mean) / population std. A group whose
// std falls below std_epsilon is degenerate and gets all zeros.
std::vector<double> normalize_advantages(const std::vector<double>& rewards,
                                         double std_epsilon = 1e-8);

// Per-sample nonnegative estimator exp(d) - d - 1 with d = logp_ref -
// logp_new, averaged over the group.
double kl_estimate(const std::vector<double>& logp_new,
                   const std::vector<double>& logp_ref);

// Full-distribution KL(p || q) from log-probability vectors over the same
// finite candidate set.
double kl_exact(const std::vector<double>& logp_p,
                const std::vector<double>& logp_q);

// sum_i ratio_i * A_i - beta * kl_estimate, the quantity gradient ascent
// maximizes. Advantages come from the group's rewards.
double grpo_objective(const PolicyGroup& group, double beta);

// Softmax policy over a finite candidate grid.
struct ToyPolicy {
  std::vector<double> logits;

  std::vector<double> probs() const;
  std::vector<double> log_probs() const;
};

// One sampled group in terms of grid indices; log-probabilities of the
// current policy are derived from a ToyPolicy when needed.
struct GroupSample {
  std::vector<int> actions;
  std::vector<double> rewards;
  std::vector<double> logp_old;
  std::vector<double> logp_ref;
};

// The PolicyGroup induced by evaluating policy on the sampled actions.
PolicyGroup bind_group(const ToyPolicy& policy, const GroupSample& sample);

double grpo_objective(const ToyPolicy& policy, const GroupSample& sample,
                      double beta, double std_epsilon = 1e-8);

// Analytic gradient of the objective above with respect to policy.logits.
std::vector<double> grpo_objective_gradient(const ToyPolicy& policy,
                                            const GroupSample& sample,
                                            double beta,
                                            double std_epsilon = 1e-8);

enum class ToyTask { box_grounding, interval_grounding };

std::string to_string(ToyTask task);
ToyTask parse_toy_task(const std::string& text);  // "box" | "interval"

// A finite grounding task: every grid candidate is pre-rendered as a tagged
// response and pre-scored against the ground truth, so expected reward under
// any policy is an exact dot product.
struct ToyTaskSpec {
  QARecord gt;
  std::vector<std::string> responses;
  std::vector<double> reward_table;
};

// box_grounding: 5x5 centers x 3 sizes = 75 boxes. interval_grounding: 20
// starts x 10 lengths = 200 intervals.
ToyTaskSpec make_toy_task(ToyTask task);

struct TrainIteration {
  int iteration = 0;
  double expected_reward = 0.0;
  double kl = 0.0;
  double objective = 0.0;

  bool operator==(const TrainIteration&) const = default;
};

void to_json(json& j, const TrainIteration& it);
void from_json(const json& j, TrainIteration& it);

struct TrainReport {
  std::vector<TrainIteration> curve;  // curve[0] is the initial policy
  std::vector<double> final_logits;

  double initial_expected_reward() const;
  double final_expected_reward() const;
  double final_kl() const;
};

// One gradient-ascent step per iteration: sample N candidates from the
// current policy, score them, standardize rewards within the group, ascend.
// The KL penalty uses the exact softmax KL to the frozen uniform reference,
// which keeps large beta values contractive; the reported objective is
// grpo_objective on the sampled group. The reference stays frozen at the
// initial policy and the snapshot refreshes every iteration.
TrainReport train_toy(ToyTask task, const GrpoConfig& cfg);

}  // namespace egokit
