// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#include "egokit/grpo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "egokit/rewards.hpp"
#include "egokit/structured_output.hpp"

namespace egokit {
namespace {

void require_finite(const std::vector<double>& values, const char* name) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(std::string(name) + " contains a non-finite value");
    }
  }
}

// Uniform double in [0,1) built from the top 53 bits of the generator.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int sample_index(const std::vector<double>& probs, std::mt19937_64& rng) {
  const double u = next_unit(rng);
  double cum = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    cum += probs[k];
    if (u < cum) return static_cast<int>(k);
  }
  return static_cast<int>(probs.size()) - 1;
}

}  // namespace

void GrpoConfig::validate() const {
  if (group_size < 2) throw Error("group_size must be at least 2");
  if (!(beta >= 0.0)) throw Error("beta must be non-negative");
  if (!(learning_rate > 0.0)) throw Error("learning_rate must be positive");
  if (iterations < 0) throw Error("iterations must be non-negative");
  if (!(std_epsilon > 0.0)) throw Error("std_epsilon must be positive");
}

void PolicyGroup::validate() const {
  const std::size_t n = rewards.size();
  if (n < 2) throw Error("policy group needs at least 2 candidates");
  if (logp_new.size() != n || logp_old.size() != n || logp_ref.size() != n) {
    throw Error("policy group lists have mismatched lengths");
  }
  if (!candidates.empty() && candidates.size() != n) {
    throw Error("policy group candidates length mismatch");
  }
  require_finite(rewards, "rewards");
  require_finite(logp_new, "logp_new");
  require_finite(logp_old, "logp_old");
  require_finite(logp_ref, "logp_ref");
}

std::vector<double> normalize_advantages(const std::vector<double>& rewards,
                                         double std_epsilon) {
  const std::size_t n = rewards.size();
  if (n < 2) throw Error("advantage normalization needs at least 2 rewards");
  const double mean =
      std::accumulate(rewards.begin(), rewards.end(), 0.0) /
      static_cast<double>(n);
  double var = 0.0;
  for (double r : rewards) {
    var += (r - mean) * (r - mean);
  }
  var /= static_cast<double>(n);
  const double std = std::sqrt(var);
  std::vector<double> advantages(n, 0.0);
  if (std < std_epsilon) return advantages;
  for (std::size_t i = 0; i < n; ++i) {
    advantages[i] = (rewards[i] - mean) / std;
  }
  return advantages;
}

double kl_estimate(const std::vector<double>& logp_new,
                   const std::vector<double>& logp_ref) {
  if (logp_new.size() != logp_ref.size()) {
    throw Error("kl_estimate needs equal-length lists");
  }
  if (logp_new.empty()) throw Error("kl_estimate needs at least 1 candidate");
  double sum = 0.0;
  for (std::size_t i = 0; i < logp_new.size(); ++i) {
    const double d = logp_ref[i] - logp_new[i];
    sum += std::exp(d) - d - 1.0;
  }
  return sum / static_cast<double>(logp_new.size());
}

double kl_exact(const std::vector<double>& logp_p,
                const std::vector<double>& logp_q) {
  if (logp_p.size() != logp_q.size()) {
    throw Error("kl_exact needs equal-length lists");
  }
  double kl = 0.0;
  for (std::size_t k = 0; k < logp_p.size(); ++k) {
    kl += std::exp(logp_p[k]) * (logp_p[k] - logp_q[k]);
  }
  return kl;
}

double grpo_objective(const PolicyGroup& group, double beta) {
  group.validate();
  const std::vector<double> advantages = normalize_advantages(group.rewards);
  double surrogate = 0.0;
  for (std::size_t i = 0; i < group.rewards.size(); ++i) {
    surrogate +=
        std::exp(group.logp_new[i] - group.logp_old[i]) * advantages[i];
  }
  return surrogate - beta * kl_estimate(group.logp_new, group.logp_ref);
}

std::vector<double> ToyPolicy::probs() const {
  std::vector<double> out = log_probs();
  for (double& v : out) v = std::exp(v);
  return out;
}

std::vector<double> ToyPolicy::log_probs() const {
  if (logits.empty()) throw Error("policy has no logits");
  const double max = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double l : logits) sum += std::exp(l - max);
  const double lse = max + std::log(sum);
  std::vector<double> out(logits.size());
  for (std::size_t k = 0; k < logits.size(); ++k) {
    out[k] = logits[k] - lse;
  }
  return out;
}

PolicyGroup bind_group(const ToyPolicy& policy, const GroupSample& sample) {
  const std::vector<double> lp = policy.log_probs();
  PolicyGroup group;
  group.rewards = sample.rewards;
  group.logp_old = sample.logp_old;
  group.logp_ref = sample.logp_ref;
  group.logp_new.reserve(sample.actions.size());
  for (int a : sample.actions) {
    if (a < 0 || static_cast<std::size_t>(a) >= lp.size()) {
      throw Error("sampled action outside the candidate grid");
    }
    group.logp_new.push_back(lp[static_cast<std::size_t>(a)]);
  }
  return group;
}

double grpo_objective(const ToyPolicy& policy, const GroupSample& sample,
                      double beta, double std_epsilon) {
  PolicyGroup group = bind_group(policy, sample);
  group.validate();
  const std::vector<double> advantages =
      normalize_advantages(group.rewards, std_epsilon);
  double surrogate = 0.0;
  for (std::size_t i = 0; i < group.rewards.size(); ++i) {
    surrogate +=
        std::exp(group.logp_new[i] - group.logp_old[i]) * advantages[i];
  }
  return surrogate - beta * kl_estimate(group.logp_new, group.logp_ref);
}

std::vector<double> grpo_objective_gradient(const ToyPolicy& policy,
                                            const GroupSample& sample,
                                            double beta, double std_epsilon) {
  const PolicyGroup group = bind_group(policy, sample);
  group.validate();
  const std::vector<double> probs = policy.probs();
  const std::vector<double> advantages =
      normalize_advantages(group.rewards, std_epsilon);
  const double n = static_cast<double>(sample.actions.size());

  // d objective / d logp_new_i, then chain through the softmax:
  // d logp_new_i / d logit_k = [k == a_i] - p_k.
  std::vector<double> grad(probs.size(), 0.0);
  double coeff_sum = 0.0;
  for (std::size_t i = 0; i < sample.actions.size(); ++i) {
    const double ratio = std::exp(group.logp_new[i] - group.logp_old[i]);
    const double d = group.logp_ref[i] - group.logp_new[i];
    const double coeff =
        ratio * advantages[i] + beta / n * (std::exp(d) - 1.0);
    grad[static_cast<std::size_t>(sample.actions[i])] += coeff;
    coeff_sum += coeff;
  }
  for (std::size_t k = 0; k < grad.size(); ++k) {
    grad[k] -= coeff_sum * probs[k];
  }
  return grad;
}

std::string to_string(ToyTask task) {
  return task == ToyTask::box_grounding ? "box" : "interval";
}

ToyTask parse_toy_task(const std::string& text) {
  if (text == "box") return ToyTask::box_grounding;
  if (text == "interval") return ToyTask::interval_grounding;
  throw Error("unknown toy task \"" + text + "\"");
}

namespace {

std::string synthesize_response(const std::string& payload, std::size_t k) {
  return "<think>grid candidate " + std::to_string(k) + "</think><answer>" +
         payload + "</answer>";
}

}  // namespace

ToyTaskSpec make_toy_task(ToyTask task) {
  ToyTaskSpec spec;
  if (task == ToyTask::box_grounding) {
    spec.gt.qa_id = "toy:box";
    spec.gt.clip_ids = {"toy"};
    spec.gt.split = Split::fg_spatial;
    spec.gt.question_type = QuestionType::fg_spatial_grounding;
    spec.gt.question = render_fg_spatial_prompt("target object");
    spec.gt.gt_box = BBox{0.3, 0.3, 0.7, 0.7};
    spec.gt.answer = render_box(*spec.gt.gt_box);

    const double centers[] = {0.2, 0.35, 0.5, 0.65, 0.8};
    const double sizes[] = {0.2, 0.3, 0.4};
    for (double cx : centers) {
      for (double cy : centers) {
        for (double size : sizes) {
          const double half = 0.5 * size;
          const BBox box{cx - half, cy - half, cx + half, cy + half};
          spec.responses.push_back(
              synthesize_response(render_box(box), spec.responses.size()));
        }
      }
    }
  } else {
    spec.gt.qa_id = "toy:interval";
    spec.gt.clip_ids = {"toy"};
    spec.gt.split = Split::fg_temporal;
    spec.gt.question_type = QuestionType::fg_temporal_grounding;
    spec.gt.question = render_fg_temporal_prompt("the target event");
    spec.gt.gt_interval = TimeInterval{12.0, 18.0};
    spec.gt.answer = render_interval(*spec.gt.gt_interval);

    for (int si = 0; si < 20; ++si) {
      for (int len = 1; len <= 10; ++len) {
        const double start = 1.5 * si;
        const TimeInterval iv{start, start + len};
        spec.responses.push_back(
            synthesize_response(render_interval(iv), spec.responses.size()));
      }
    }
  }

  spec.reward_table.reserve(spec.responses.size());
  for (const std::string& response : spec.responses) {
    spec.reward_table.push_back(score_candidate(response, spec.gt).total);
  }
  return spec;
}

void to_json(json& j, const TrainIteration& it) {
  j = json{{"iteration", it.iteration},
           {"expected_reward", it.expected_reward},
           {"kl", it.kl},
           {"objective", it.objective}};
}

void from_json(const json& j, TrainIteration& it) {
  it.iteration = require_key(j, "iteration").get<int>();
  it.expected_reward = require_key(j, "expected_reward").get<double>();
  it.kl = require_key(j, "kl").get<double>();
  it.objective = require_key(j, "objective").get<double>();
}

double TrainReport::initial_expected_reward() const {
  if (curve.empty()) throw Error("empty training curve");
  return curve.front().expected_reward;
}

double TrainReport::final_expected_reward() const {
  if (curve.empty()) throw Error("empty training curve");
  return curve.back().expected_reward;
}

double TrainReport::final_kl() const {
  if (curve.empty()) throw Error("empty training curve");
  return curve.back().kl;
}

TrainReport train_toy(ToyTask task, const GrpoConfig& cfg) {
  cfg.validate();
  const ToyTaskSpec spec = make_toy_task(task);
  const std::size_t grid = spec.reward_table.size();

  ToyPolicy policy;
  policy.logits.assign(grid, 0.0);
  const std::vector<double> ref_logp = policy.log_probs();

  auto expected_reward = [&](const std::vector<double>& probs) {
    double sum = 0.0;
    for (std::size_t k = 0; k < grid; ++k) {
      sum += probs[k] * spec.reward_table[k];
    }
    return sum;
  };

  TrainReport report;
  report.curve.push_back(
      TrainIteration{0, expected_reward(policy.probs()), 0.0, 0.0});

  std::mt19937_64 rng(cfg.seed);
  const int n = cfg.group_size;

  for (int iter = 1; iter <= cfg.iterations; ++iter) {
    const std::vector<double> old_probs = policy.probs();
    const std::vector<double> old_logp = policy.log_probs();

    GroupSample sample;
    sample.actions.reserve(n);
    for (int i = 0; i < n; ++i) {
      const int a = sample_index(old_probs, rng);
      sample.actions.push_back(a);
      sample.rewards.push_back(spec.reward_table[static_cast<std::size_t>(a)]);
      sample.logp_old.push_back(old_logp[static_cast<std::size_t>(a)]);
      sample.logp_ref.push_back(ref_logp[static_cast<std::size_t>(a)]);
    }

    // Reward term of the ascent direction; at the sampling point the ratios
    // are 1, so this is the plain group-standardized policy gradient.
    std::vector<double> grad =
        grpo_objective_gradient(policy, sample, 0.0, cfg.std_epsilon);

    // KL term, taken on the exact softmax divergence so that large beta
    // contracts the policy toward the reference instead of overshooting on
    // the sampled coordinates.
    if (cfg.beta > 0.0) {
      const std::vector<double> lp = policy.log_probs();
      const double kl = kl_exact(lp, ref_logp);
      for (std::size_t k = 0; k < grid; ++k) {
        grad[k] -= cfg.beta * std::exp(lp[k]) * (lp[k] - ref_logp[k] - kl);
      }
    }

    for (std::size_t k = 0; k < grid; ++k) {
      policy.logits[k] += cfg.learning_rate * grad[k];
    }

    const std::vector<double> new_probs = policy.probs();
    const std::vector<double> new_logp = policy.log_probs();
    report.curve.push_back(TrainIteration{
        iter, expected_reward(new_probs), kl_exact(new_logp, ref_logp),
        grpo_objective(policy, sample, cfg.beta, cfg.std_epsilon)});
  }

  report.final_logits = policy.logits;
  return report;
}

}  // namespace egokit
